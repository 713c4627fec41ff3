//! The verification battery behind `tricat suite`: each check runs one
//! family of properties over the bundled fixtures or over exhaustively
//! enumerated small inputs.

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitset::Bits;
use crate::mf::{self, Matrix, MatrixFactorization, MfMorphism};
use crate::polyalg::{self, Field, Ideal, Poly, Ring, Q};
use crate::spectral_space::{enumerate_posets, permutations, SpecSpace};
use crate::support_model::SupportModel;
use crate::tensor_model::{unit_not_generating_model, TensorModel};

pub const FIXTURES: &[(&str, &str)] = &[
    ("chain.space", include_str!("../fixtures/chain.space")),
    ("fan.space", include_str!("../fixtures/fan.space")),
    ("point.space", include_str!("../fixtures/point.space")),
    ("chain.model", include_str!("../fixtures/chain.model")),
    ("fan_tensor.model", include_str!("../fixtures/fan_tensor.model")),
    ("nilpotent.model", include_str!("../fixtures/nilpotent.model")),
    ("a_inf.ring", include_str!("../fixtures/a_inf.ring")),
    ("d_inf.ring", include_str!("../fixtures/d_inf.ring")),
    ("knorrer_x2.cert", include_str!("../fixtures/knorrer_x2.cert")),
    ("knorrer_x2y.cert", include_str!("../fixtures/knorrer_x2y.cert")),
    ("a_inf_end.cert", include_str!("../fixtures/a_inf_end.cert")),
    ("d_inf_end.cert", include_str!("../fixtures/d_inf_end.cert")),
    ("a_inf.mf", include_str!("../fixtures/a_inf.mf")),
    ("d_inf.mf", include_str!("../fixtures/d_inf.mf")),
    ("trivial.mf", include_str!("../fixtures/trivial.mf")),
];

pub fn fixture(name: &str) -> &'static str {
    FIXTURES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s).unwrap_or_else(|| panic!("no fixture {name}"))
}

/// Result of one check. `failures` is empty iff the check passed.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
    pub elapsed: Duration,
    pub limit: Option<Duration>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.limit.is_none_or(|l| self.elapsed <= l)
    }
}

struct Tally {
    name: &'static str,
    start: Instant,
    cases: usize,
    failures: Vec<String>,
    limit: Option<Duration>,
}

impl Tally {
    fn new(name: &'static str, limit_secs: Option<u64>) -> Self {
        Tally { name, start: Instant::now(), cases: 0, failures: Vec::new(), limit: limit_secs.map(Duration::from_secs) }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn finish(self) -> CheckOutcome {
        CheckOutcome {
            name: self.name,
            cases: self.cases,
            failures: self.failures,
            elapsed: self.start.elapsed(),
            limit: self.limit,
        }
    }
}

/// Every poset with at most `max_points` points, up to isomorphism.
pub fn small_posets(max_points: usize) -> Vec<SpecSpace> {
    (1..=max_points).flat_map(enumerate_posets).collect()
}

fn sorted(mut v: Vec<Bits>) -> Vec<Bits> {
    v.sort();
    v
}

fn is_injective(v: &[Bits]) -> bool {
    let mut s = v.to_vec();
    s.sort();
    s.dedup();
    s.len() == v.len()
}

/// Canonical models reconstruct their space and supports.
pub fn reconstruction(max_points: usize) -> CheckOutcome {
    let mut t = Tally::new("reconstruction", Some(30));
    for space in small_posets(max_points) {
        let model = SupportModel::canonical(&space);
        match model.verify_reconstruction() {
            Ok(r) => t.check(r.passes(), || format!("{space:?}: φ = {:?}", r.phi)),
            Err(e) => t.check(false, || format!("{space:?}: {e}")),
        }
    }
    t.finish()
}

/// Closed sets are realized, and the three lattice bijections hold.
pub fn bijections(max_points: usize) -> CheckOutcome {
    let mut t = Tally::new("bijections", Some(30));
    for space in small_posets(max_points) {
        let model = SupportModel::canonical(&space);
        for z in space.closed_sets() {
            let ok = model.realize_closed(z).is_ok_and(|m| model.sigma(m) == z);
            t.check(ok, || format!("{space:?}: {} not realized", space.format_subset(z)));
        }
        let c = model.is_classifying();
        let thick: Vec<Bits> = model.thick_subcategories().into_iter().map(|x| model.f_sigma(x)).collect();
        t.check(
            c.holds() && is_injective(&thick) && sorted(thick.clone()) == sorted(space.specialization_closed_sets()),
            || format!("{space:?}: Th and Spcl differ"),
        );
        let principal: Vec<Bits> =
            model.principal_thick_subcategories().into_iter().map(|x| model.f_sigma(x)).collect();
        t.check(
            is_injective(&principal) && sorted(principal.clone()) == sorted(space.closed_sets()),
            || format!("{space:?}: PTh and Cl differ"),
        );
        let points: Vec<Bits> = model.spec_of().points.into_iter().map(|x| model.f_sigma(x)).collect();
        t.check(
            is_injective(&points) && sorted(points.clone()) == sorted(space.irreducible_sets()),
            || format!("{space:?}: Spec and Irr differ"),
        );
    }
    t.finish()
}

/// Random relabellings of small posets: transported support recovers the
/// relabelling as a homeomorphism compatible with localization.
pub fn transport(pairs: usize, seed: u64) -> CheckOutcome {
    let mut t = Tally::new("transport", None);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let by_size: Vec<Vec<SpecSpace>> = (1..=5).map(enumerate_posets).collect();
    for _ in 0..pairs {
        let n = rng.gen_range(1..=5);
        let a = by_size[n - 1].choose(&mut rng).expect("nonempty").clone();
        let perms = permutations(n);
        let perm = perms.choose(&mut rng).expect("nonempty").clone();
        let b = a.permuted("image", &perm);
        let ma = SupportModel::canonical(&a);
        let mb = SupportModel::canonical(&b);
        let map: Vec<usize> = (0..ma.len())
            .map(|m| {
                let image = SpecSpace::map_subset(&perm, ma.sigma(m));
                (0..mb.len()).find(|&k| mb.sigma(k) == image).expect("canonical model realizes every closed set")
            })
            .collect();
        match ma.transport_support(&mb, &map) {
            Ok(r) => {
                let order = SupportModel::check_order_transport(&a, &b, &r.phi);
                t.check(r.passes() && r.phi == perm && order.passes(), || {
                    format!("{a:?} under {perm:?}: φ = {:?}, order failures {:?}", r.phi, order.failures)
                });
            }
            Err(e) => t.check(false, || format!("{a:?} under {perm:?}: {e}")),
        }
    }
    t.finish()
}

/// Unit generation and the radical-ideal classification on intersection
/// tensor models, plus the nilpotent counter-model.
pub fn unit_generation(max_points: usize) -> CheckOutcome {
    let mut t = Tally::new("unit generation", Some(60));
    for space in small_posets(max_points) {
        let tm = TensorModel::canonical(&space);
        let r = tm.check_unit_generation();
        t.check(r.implications_hold && r.unit_generates && r.thick_are_ideals && r.classifying, || {
            format!("{space:?}: {r:?}")
        });
        match tm.classify_radical_ideals() {
            Ok(c) => t.check(c.holds(), || format!("{space:?}: {:?}", c.counterexample)),
            Err(e) => t.check(false, || format!("{space:?}: {e}")),
        }
    }
    let counter = unit_not_generating_model();
    let r = counter.check_unit_generation();
    t.check(!r.unit_generates && r.non_ideal_witness.is_some() && r.implications_hold, || {
        format!("counter-model: {r:?}")
    });
    t.finish()
}

fn q_ideal(ring: &Ring, gens: &[&str]) -> Ideal<Q> {
    Ideal::new(ring.nvars(), gens.iter().map(|g| ring.parse(g).expect("valid polynomial")).collect())
}

/// Singular loci from Jacobian ideals, Knörrer-type extensions and the
/// coordinate-ring certificates.
pub fn singular_loci() -> CheckOutcome {
    let mut t = Tally::new("singular loci", Some(10));
    let cases: [(&[&str], &str, &[&str]); 3] =
        [(&["x", "y"], "x^2", &["x"]), (&["x", "y"], "x^2*y", &["x"]), (&["x", "y", "z"], "x^2*y + z^2", &["x", "z"])];
    for (vars, f, expected) in cases {
        let ring = Ring::new(vars);
        let fp: Poly<Q> = ring.parse(f).expect("valid polynomial");
        let j = polyalg::jacobian_ideal(&fp).expect("characteristic zero");
        let ok = j.equal_up_to_radical(&q_ideal(&ring, expected)).unwrap_or(false);
        t.check(ok, || format!("√J({f}) ≠ ({})", expected.join(", ")));
    }
    for f in ["x^2", "x^2*y"] {
        let base = Ring::new(&["x", "y"]);
        let ext = Ring::new(&["x", "y", "u", "v"]);
        let fp: Poly<Q> = base.parse(f).expect("valid polynomial");
        let j = polyalg::jacobian_ideal(&fp).expect("characteristic zero");
        let lifted: Vec<Poly<Q>> = j.gens().iter().map(|g| g.extend(2)).chain([ext.parse("u").unwrap(), ext.parse("v").unwrap()]).collect();
        let fuv = fp.extend(2).add(&ext.parse("u*v").unwrap());
        let jext = polyalg::jacobian_ideal(&fuv).expect("characteristic zero");
        let ok = jext.equal_up_to_radical(&Ideal::new(4, lifted)).unwrap_or(false);
        t.check(ok, || format!("√J({f} + uv) ≠ √J({f}) + (u, v)"));
    }
    for name in ["knorrer_x2.cert", "knorrer_x2y.cert", "a_inf_end.cert", "d_inf_end.cert"] {
        let ok = polyalg::parse_cert::<Q>(fixture(name))
            .ok()
            .and_then(|c| polyalg::check_ring_iso(&c).ok())
            .is_some_and(|r| r.passes());
        t.check(ok, || format!("certificate {name} does not verify"));
    }
    t.finish()
}

fn load_mf(name: &str) -> MatrixFactorization<Q> {
    MatrixFactorization::parse(fixture(name)).expect("fixture parses")
}

/// The A∞ curve case: cyclic stable End `≅ k[y]` with full support.
pub fn a_infinity() -> CheckOutcome {
    let mut t = Tally::new("A-infinity stable End", Some(10));
    let m = load_mf("a_inf.mf");
    t.check(m.check_mf(), || "fixture is not a factorization".into());
    let e = match mf::stable_end_ring(&m) {
        Ok(e) => e,
        Err(err) => {
            t.check(false, || err.to_string());
            return t.finish();
        }
    };
    t.check(e.hom.module.ngens == 1 && e.hom.generators[0] == m.identity(), || {
        format!("expected a cyclic module on id, got {} generators", e.hom.module.ngens)
    });
    let ann = mf::annihilator(&e.hom.module);
    t.check(ann.same_ideal(&q_ideal(&m.ring, &["x"])), || "annihilator is not (x)".into());
    let cert = polyalg::parse_cert::<Q>(fixture("a_inf_end.cert")).expect("fixture parses");
    let ring_matches = e.ring.as_ref().is_some_and(|r| r.ring == cert.source.ring && r.ideal.same_ideal(&cert.source.ideal));
    t.check(ring_matches, || "computed presentation differs from the certificate source".into());
    t.check(polyalg::check_ring_iso(&cert).is_ok_and(|r| r.passes()), || "certificate fails".into());
    t.check(mf::full_support_check(&m).unwrap_or(false), || "full support fails".into());
    t.finish()
}

/// The D∞ surface case: stable End generated by `id, w` with `w² + y = 0`.
pub fn d_infinity() -> CheckOutcome {
    let mut t = Tally::new("D-infinity stable End", Some(120));
    let m = load_mf("d_inf.mf");
    t.check(m.check_mf(), || "fixture is not a factorization".into());
    let e = match mf::stable_end_ring(&m) {
        Ok(e) => e,
        Err(err) => {
            t.check(false, || err.to_string());
            return t.finish();
        }
    };
    t.check(e.hom.generators.len() == 2 && e.hom.generators[0] == m.identity(), || {
        format!("expected generators id, w; got {}", e.hom.generators.len())
    });
    t.check(e.is_commutative() && e.nonassociative.is_empty(), || {
        format!("commutators {:?}, associators {:?}", e.noncommuting, e.nonassociative)
    });
    let cert = polyalg::parse_cert::<Q>(fixture("d_inf_end.cert")).expect("fixture parses");
    match e.eliminated(&["x", "z"]) {
        Some(Ok(small)) => {
            let target = q_ideal(&small.ring, &["w^2 + y"]);
            t.check(small.ideal.equal_up_to_radical(&target).unwrap_or(false), || {
                format!("relations {} are not radical-equal to (w^2 + y)", small.show())
            });
            t.check(small.ring == cert.source.ring && small.ideal.same_ideal(&cert.source.ideal), || {
                "computed presentation differs from the certificate source".into()
            });
        }
        _ => t.check(false, || "no commutative presentation".into()),
    }
    t.check(polyalg::check_ring_iso(&cert).is_ok_and(|r| r.passes()), || "certificate fails".into());
    let ann = mf::annihilator(&e.hom.module);
    t.check(ann.same_ideal(&q_ideal(&m.ring, &["x", "z"])), || "annihilator is not (x, z)".into());
    let jac = polyalg::jacobian_ideal(&m.f).expect("characteristic zero");
    t.check(ann.equal_up_to_radical(&jac).unwrap_or(false), || "annihilator is not √J(f)".into());
    t.check(mf::full_support_check(&m).unwrap_or(false), || "full support fails".into());
    t.finish()
}

/// An elementary matrix `I + c·e_ij` and its inverse.
fn elementary(nvars: usize, n: usize, i: usize, j: usize, c: &Poly<Q>) -> (Matrix<Q>, Matrix<Q>) {
    let mut e = Matrix::identity(nvars, n);
    let mut inv = Matrix::identity(nvars, n);
    e.set(i, j, c.clone());
    inv.set(i, j, c.scale(&Q::from_i64(-1)));
    (e, inv)
}

/// A random invertible matrix, as a product of elementary ones, with its inverse.
pub fn random_unimodular(rng: &mut impl Rng, ring: &Ring, n: usize) -> (Matrix<Q>, Matrix<Q>) {
    let nv = ring.nvars();
    let mut p = Matrix::identity(nv, n);
    let mut p_inv = Matrix::identity(nv, n);
    if n < 2 {
        return (p, p_inv);
    }
    for _ in 0..rng.gen_range(1..=3) {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let c: Poly<Q> = match rng.gen_range(0..4) {
            0 => Poly::from_i64(nv, rng.gen_range(-2..=2)),
            k => Poly::var(nv, (k - 1) % nv).scale(&Q::from_i64(rng.gen_range(-1i64..=1))),
        };
        let (e, e_inv) = elementary(nv, n, i, j, &c);
        p = e.mul(&p);
        p_inv = p_inv.mul(&e_inv);
    }
    (p, p_inv)
}

/// A random factorization of `f` (`x^2` or `x*y` over `QQ[x,y]`) of rank
/// one or two, in random coordinates.
pub fn random_factorization(rng: &mut impl Rng, f: &str) -> MatrixFactorization<Q> {
    let ring = Ring::new(&["x", "y"]);
    let blocks: &[(&str, &str)] = match f {
        "x^2" => &[("x", "x"), ("1", "x^2"), ("x^2", "1")],
        _ => &[("x", "y"), ("y", "x"), ("1", "x*y"), ("x*y", "1")],
    };
    let fp: Poly<Q> = ring.parse(f).expect("valid polynomial");
    let block = |rng: &mut dyn rand::RngCore| {
        let (a, b) = blocks[rng.gen_range(0..blocks.len())];
        let a = Matrix::scalar(2, 1, &ring.parse(a).unwrap());
        let b = Matrix::scalar(2, 1, &ring.parse(b).unwrap());
        MatrixFactorization::new(ring.clone(), fp.clone(), a, b).expect("square")
    };
    let mut m = block(rng);
    if rng.gen_bool(0.5) {
        m = m.direct_sum(&block(rng)).expect("same potential");
    }
    let (p, p_inv) = random_unimodular(rng, &ring, m.rank());
    let (q, q_inv) = random_unimodular(rng, &ring, m.rank());
    m.change_basis(&p, &p_inv, &q, &q_inv)
}

/// Stable Hom is unchanged by trivial summands, shifts and changes of basis.
pub fn mf_invariance(instances: usize, seed: u64) -> CheckOutcome {
    let mut t = Tally::new("MF invariance", Some(60));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..instances {
        let f = if k % 2 == 0 { "x^2" } else { "x*y" };
        let m = random_factorization(&mut rng, f);
        let n = random_factorization(&mut rng, f);
        let label = || format!("M = {}N = {}", m.to_text(), n.to_text());
        if !(m.check_mf() && n.check_mf()) {
            t.check(false, || format!("not factorizations: {}", label()));
            continue;
        }
        let trivial = MatrixFactorization::trivial(m.ring.clone(), m.f.clone());
        for t_summand in [trivial.clone(), trivial.shift()] {
            let bigger = m.direct_sum(&t_summand).expect("same potential");
            let (inc, proj) = mf::summand_maps(&m, 1);
            let src = mf::certify_source_change(&m, &bigger, &n, &inc, &proj);
            t.check(src.as_ref().is_ok_and(|c| c.passes()), || format!("summand in source: {src:?}; {}", label()));
            let tgt = mf::certify_target_change(&n, &m, &bigger, &inc, &proj);
            t.check(tgt.as_ref().is_ok_and(|c| c.passes()), || format!("summand in target: {tgt:?}; {}", label()));
        }
        let shift = mf::certify_shift(&m, &n);
        t.check(shift.as_ref().is_ok_and(|c| c.passes()), || format!("shift: {shift:?}; {}", label()));
        let twice = m.shift().shift();
        t.check(twice == m, || "shift is not 2-periodic".into());
        let (p, p_inv) = random_unimodular(&mut rng, &m.ring, m.rank());
        let (q, q_inv) = random_unimodular(&mut rng, &m.ring, m.rank());
        let moved = m.change_basis(&p, &p_inv, &q, &q_inv);
        let u = MfMorphism { alpha0: p, alpha1: q };
        let v = MfMorphism { alpha0: p_inv, alpha1: q_inv };
        let cb = mf::certify_source_change(&m, &moved, &n, &u, &v);
        t.check(cb.as_ref().is_ok_and(|c| c.passes()), || format!("change of basis: {cb:?}; {}", label()));
    }
    t.finish()
}

/// The checks behind `tricat suite`, in a fixed order.
pub fn run_all(seed: u64) -> Vec<CheckOutcome> {
    vec![
        reconstruction(5),
        bijections(5),
        transport(50, seed),
        unit_generation(4),
        singular_loci(),
        a_infinity(),
        d_infinity(),
        mf_invariance(20, seed),
    ]
}
