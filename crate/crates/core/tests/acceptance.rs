//! The acceptance battery: one line per criterion, nonzero exit on failure.

mod common;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tricat::bitset::Bits;
use tricat::mf::{self, Matrix, MatrixFactorization, MfMorphism};
use tricat::polyalg::{self, Ideal, Poly, Ring, Q};
use tricat::spectral_space::enumerate_posets;
use tricat::suite::{self, CheckOutcome};
use tricat::support_model::SupportModel;
use tricat::tensor_model::TensorModel;

const SEED: u64 = 0x5eed;

struct Line {
    index: usize,
    title: &'static str,
    passed: bool,
    detail: String,
    elapsed: Duration,
    limit: Option<Duration>,
}

fn from_outcome(index: usize, title: &'static str, o: CheckOutcome, extra: Vec<String>) -> Line {
    let passed = o.passed() && extra.is_empty();
    let mut failures = o.failures;
    failures.extend(extra);
    let detail = if failures.is_empty() {
        format!("{} cases", o.cases)
    } else {
        format!("{} failures, first: {}", failures.len(), failures[0])
    };
    Line { index, title, passed, detail, elapsed: o.elapsed, limit: o.limit }
}

/// Criterion 1, with the poset corpus checked against a brute-force count.
fn reconstruction() -> Line {
    let mut extra = Vec::new();
    for n in 1..=5 {
        let listed = enumerate_posets(n).len();
        let brute = common::count_posets(n);
        if listed != brute {
            extra.push(format!("{n} points: {listed} posets listed, {brute} by brute force"));
        }
    }
    from_outcome(1, "canonical models reconstruct (posets up to 5 points)", suite::reconstruction(5), extra)
}

/// Criterion 2, with thick-subcategory counts compared to a brute-force
/// count of specialization-closed subsets.
fn bijections() -> Line {
    let mut extra = Vec::new();
    for space in suite::small_posets(5) {
        let model = SupportModel::canonical(&space);
        let thick = model.is_classifying().thick_count;
        let brute = common::count_specialization_closed(&space);
        if thick != brute {
            extra.push(format!("{space:?}: {thick} thick subcategories, {brute} spcl subsets"));
        }
    }
    from_outcome(2, "realization and Th/Spcl, PTh/Cl, Spec/Irr bijections", suite::bijections(5), extra)
}

fn transport() -> Line {
    from_outcome(3, "transport along 50 random poset isomorphisms", suite::transport(50, SEED), Vec::new())
}

/// Criterion 4, with primes of each intersection model compared to the
/// point kernels `{M : x ∉ σ(M)}`.
fn unit_generation() -> Line {
    let mut extra = Vec::new();
    for space in suite::small_posets(4) {
        let tm = TensorModel::canonical(&space);
        let m = &tm.model;
        let mut primes = tm.primes();
        primes.sort();
        let mut kernels: Vec<Bits> =
            (0..space.len()).map(|x| (0..m.len()).filter(|&o| !m.sigma(o).contains(x)).collect()).collect();
        kernels.sort();
        if primes != kernels {
            extra.push(format!("{space:?}: primes differ from point kernels"));
        }
    }
    from_outcome(4, "unit generation and radical ideal classification", suite::unit_generation(4), extra)
}

/// Criterion 5, with each radical inclusion also witnessed by an explicit
/// power in the ideal.
fn singular_loci() -> Line {
    let mut extra = Vec::new();
    let cases: [(&[&str], &str, &[&str]); 3] =
        [(&["x", "y"], "x^2", &["x"]), (&["x", "y"], "x^2*y", &["x"]), (&["x", "y", "z"], "x^2*y + z^2", &["x", "z"])];
    for (vars, f, rad) in cases {
        let r = Ring::new(vars);
        let j = polyalg::jacobian_ideal(&r.parse::<Q>(f).unwrap()).unwrap();
        for g in rad {
            let g: Poly<Q> = r.parse(g).unwrap();
            if !(1..=6).any(|k| j.contains(&g.pow(k))) {
                extra.push(format!("no power of {} lies in J({f})", r.show(&g)));
            }
        }
        let target = Ideal::new(vars.len(), rad.iter().map(|g| r.parse(g).unwrap()).collect());
        if !j.gens().iter().all(|g| target.contains(g)) {
            extra.push(format!("J({f}) is not inside ({})", rad.join(", ")));
        }
    }
    let outcome = suite::singular_loci();
    let mut line = from_outcome(5, "Jacobian ideals, Knörrer extensions, certificates", outcome, extra);
    line.limit = Some(Duration::from_secs(10));
    line
}

fn a_infinity() -> Line {
    from_outcome(6, "A-infinity d=1 stable End is k[y]", suite::a_infinity(), Vec::new())
}

/// Criterion 7, with `w ∘ w = -y·id` recomputed from the matrices.
fn d_infinity() -> Line {
    let mut extra = Vec::new();
    let m = MatrixFactorization::<Q>::parse(suite::fixture("d_inf.mf")).unwrap();
    let r = &m.ring;
    let w0 = Matrix::parse("[[0, -y], [1, 0]]", r).unwrap();
    let w = MfMorphism { alpha0: w0.clone(), alpha1: w0 };
    let minus_y: Poly<Q> = r.parse("-y").unwrap();
    if !w.is_morphism(&m, &m) || w.compose(&w) != m.identity().scale(&minus_y) {
        extra.push("hand-built w is not a square root of -y".into());
    }
    let end = mf::stable_end_ring(&m).unwrap();
    let coords = end.hom.coordinates(&w);
    if coords.is_none() {
        extra.push("hand-built w is not in the stable End".into());
    }
    from_outcome(7, "D-infinity d=2 stable End is k[y,w]/(w^2+y)", suite::d_infinity(), extra)
}

fn mf_invariance() -> Line {
    from_outcome(8, "MF invariance on 20 random factorizations", suite::mf_invariance(20, SEED), Vec::new())
}

/// Criterion 9: Gröbner membership against dense linear algebra. For
/// homogeneous ideals and targets the degree-bounded oracle is exact.
fn groebner_oracle() -> Line {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut failures = Vec::new();
    let mut cases = 0;
    let mut members = 0;
    for _ in 0..200 {
        let nvars = rng.gen_range(1..=3);
        let ngens = rng.gen_range(1..=3);
        let gens: Vec<Poly<Q>> = (0..ngens)
            .map(|_| {
                let d = rng.gen_range(1..=4);
                let t = rng.gen_range(1..=3);
                common::random_poly(&mut rng, nvars, d, true, t)
            })
            .collect();
        let ideal = Ideal::new(nvars, gens.clone());
        let d = rng.gen_range(1..=5);
        let mut member = Poly::zero(nvars);
        for g in &gens {
            if let Some(dg) = g.total_degree().filter(|&dg| dg <= d) {
                member = member.add(&g.mul(&common::random_poly(&mut rng, nvars, d - dg, true, 2)));
            }
        }
        let other = common::random_poly(&mut rng, nvars, d, true, 3);
        for h in [member.clone(), other, member.add(&common::random_poly(&mut rng, nvars, d, true, 1))] {
            cases += 1;
            let gb = ideal.contains(&h);
            members += usize::from(gb);
            let dense = common::dense_member(nvars, &gens, &h, d);
            if gb != dense {
                failures.push(format!("{:?} in ({:?}): basis says {gb}, oracle {dense}", h, gens));
            }
        }
    }
    let o = CheckOutcome { name: "groebner oracle", cases, failures, elapsed: start.elapsed(), limit: None };
    let mut line = from_outcome(9, "Gröbner membership agrees with the dense oracle (200 ideals)", o, Vec::new());
    line.detail.push_str(&format!(", {members} members"));
    line
}

fn main() {
    let criteria: [fn() -> Line; 9] = [
        reconstruction,
        bijections,
        transport,
        unit_generation,
        singular_loci,
        a_infinity,
        d_infinity,
        mf_invariance,
        groebner_oracle,
    ];
    let mut all = true;
    for c in criteria {
        let line = c();
        let timely = line.limit.is_none_or(|l| line.elapsed <= l);
        let passed = line.passed && timely;
        all &= passed;
        let limit = line.limit.map(|l| format!(" (limit {} s)", l.as_secs())).unwrap_or_default();
        println!(
            "criterion {} {}: {} in {:.2} s{limit}: {}",
            line.index,
            if passed { "PASS" } else { "FAIL" },
            line.title,
            line.elapsed.as_secs_f64(),
            line.detail
        );
    }
    if !all {
        std::process::exit(1);
    }
}
