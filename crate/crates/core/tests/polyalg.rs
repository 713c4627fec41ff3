mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tricat::polyalg::{jacobian_ideal, Fp, Ideal, ModuleGb, MonoOrder, Poly, Ring, Q};

fn polys(seed: u64, nvars: usize, count: usize, homogeneous: bool) -> Vec<Poly<Q>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|i| common::random_poly(&mut rng, nvars, 1 + (i as u32 % 3), homogeneous, 3)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(seed in any::<u64>(), nvars in 1usize..=3) {
        let p = polys(seed, nvars, 3, false);
        let (a, b, c) = (&p[0], &p[1], &p[2]);
        prop_assert_eq!(a.mul(b), b.mul(a));
        prop_assert_eq!(a.mul(b).mul(c), a.mul(&b.mul(c)));
        prop_assert_eq!(a.mul(&b.add(c)), a.mul(b).add(&a.mul(c)));
        prop_assert!(a.sub(a).is_zero());
        prop_assert_eq!(a.pow(3), a.mul(a).mul(a));
    }

    #[test]
    fn derivatives_are_derivations(seed in any::<u64>(), nvars in 1usize..=3, i in 0usize..3) {
        let i = i % nvars;
        let p = polys(seed, nvars, 2, false);
        let (a, b) = (&p[0], &p[1]);
        prop_assert_eq!(a.add(b).derivative(i), a.derivative(i).add(&b.derivative(i)));
        prop_assert_eq!(a.mul(b).derivative(i), a.derivative(i).mul(b).add(&a.mul(&b.derivative(i))));
    }

    #[test]
    fn reduced_bases_ignore_generator_order(seed in any::<u64>(), nvars in 1usize..=3) {
        let gens = polys(seed, nvars, 3, false);
        let mut reversed = gens.clone();
        reversed.reverse();
        let a = Ideal::new(nvars, gens);
        let b = Ideal::new(nvars, reversed);
        prop_assert_eq!(a.groebner().polys(), b.groebner().polys());
        prop_assert!(a.same_ideal(&b));
    }

    #[test]
    fn division_reconstructs_the_dividend(seed in any::<u64>(), nvars in 1usize..=3) {
        let p = polys(seed, nvars, 4, false);
        let ideal = Ideal::new(nvars, p[..3].to_vec());
        let gb = ideal.groebner();
        let (qs, r) = gb.divide(&p[3]);
        let mut total = r.clone();
        for (q, g) in qs.iter().zip(gb.polys()) {
            total = total.add(&q.mul(g));
        }
        prop_assert_eq!(total, p[3].clone());
        prop_assert_eq!(r, ideal.normal_form(&p[3]));
    }

    #[test]
    fn lifts_express_members_in_the_generators(seed in any::<u64>(), nvars in 1usize..=3) {
        let p = polys(seed, nvars, 5, false);
        let gens: Vec<Vec<Poly<Q>>> = vec![vec![p[0].clone(), p[1].clone()], vec![p[2].clone(), p[0].clone()]];
        let v: Vec<Poly<Q>> = (0..2).map(|k| p[3].mul(&gens[0][k]).add(&p[4].mul(&gens[1][k]))).collect();
        let gb = ModuleGb::new(nvars, 2, &gens, MonoOrder::GrevLex, true);
        let cof = gb.lift(&v).expect("member");
        for k in 0..2 {
            let recombined = cof[0].mul(&gens[0][k]).add(&cof[1].mul(&gens[1][k]));
            prop_assert_eq!(&recombined, &v[k]);
        }
        for syz in gb.syzygies() {
            for k in 0..2 {
                prop_assert!(syz[0].mul(&gens[0][k]).add(&syz[1].mul(&gens[1][k])).is_zero());
            }
        }
    }

    #[test]
    fn powers_of_members_lie_in_the_radical(seed in any::<u64>(), nvars in 1usize..=2, k in 1u32..=3) {
        let p = polys(seed, nvars, 3, true);
        let ideal = Ideal::new(nvars, vec![p[0].pow(k), p[1].clone()]);
        prop_assert!(ideal.radical_member(&p[0]));
        let bigger = Ideal::new(nvars, vec![p[0].clone(), p[1].clone(), p[2].clone()]);
        prop_assert!(ideal.radical_contained_in(&bigger).unwrap());
    }

    #[test]
    fn dense_witnesses_are_sound_for_inhomogeneous_ideals(seed in any::<u64>(), nvars in 1usize..=3) {
        let p = polys(seed, nvars, 4, false);
        let ideal = Ideal::new(nvars, p[..2].to_vec());
        let h = p[2].mul(&p[0]).add(&p[3].mul(&p[1]));
        prop_assert!(ideal.contains(&h));
        if common::dense_member(nvars, &p[..2], &p[3], 4) {
            prop_assert!(ideal.contains(&p[3]));
        }
    }
}

#[test]
fn jacobian_of_the_d_infinity_potential() {
    let r = Ring::new(&["x", "y", "z"]);
    let f: Poly<Q> = r.parse("x^2*y + z^2").unwrap();
    let j = jacobian_ideal(&f).unwrap();
    let expected = Ideal::new(3, ["x*y", "x^2", "z"].iter().map(|s| r.parse(s).unwrap()).collect());
    assert!(j.same_ideal(&expected));
    let origin = Ideal::new(3, ["x", "z"].iter().map(|s| r.parse(s).unwrap()).collect());
    assert!(j.equal_up_to_radical(&origin).unwrap());
}

#[test]
fn elimination_of_a_twisted_cubic() {
    let r = Ring::new(&["t", "x", "y", "z"]);
    let gens = ["x - t", "y - t^2", "z - t^3"].iter().map(|s| r.parse(s).unwrap()).collect();
    let eliminated: Ideal<Q> = Ideal::new(4, gens).eliminate(&[0]);
    for g in ["y - x^2", "z - x*y", "x*z - y^2"] {
        assert!(eliminated.contains(&r.parse(g).unwrap()), "{g}");
    }
    assert!(eliminated.gens().iter().all(|g| !g.uses_var(0)));
}

#[test]
fn unit_ideals_are_detected() {
    let r = Ring::new(&["x", "y"]);
    let ideal: Ideal<Q> = Ideal::new(2, vec![r.parse("x*y - 1").unwrap(), r.parse("x").unwrap()]);
    assert!(ideal.is_unit());
    assert_eq!(ideal.groebner().polys(), &[Poly::one(2)]);
}

#[test]
fn jacobians_in_positive_characteristic_reject_divisible_exponents() {
    let r = Ring::new(&["x", "y"]);
    let f: Poly<Fp<2>> = r.parse("x^2 + y^3").unwrap();
    assert!(jacobian_ideal(&f).is_err());
    let g: Poly<Fp<5>> = r.parse("x^2 + y^3").unwrap();
    assert!(jacobian_ideal(&g).unwrap().contains(&r.parse("y^2").unwrap()));
}
