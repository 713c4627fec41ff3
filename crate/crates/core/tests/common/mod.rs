//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use rand::Rng;
use tricat::polyalg::{Field, Mono, Poly, Q};

/// All monomials in `nvars` variables of total degree at most `max_deg`.
pub fn monomials(nvars: usize, max_deg: u32) -> Vec<Mono> {
    fn go(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Mono>) {
        if i == cur.len() {
            out.push(Mono::from_exps(cur));
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            go(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    go(0, max_deg, &mut vec![0; nvars], &mut out);
    out
}

/// Rank of a dense rational matrix, by Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<Q>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = &rows[i][c] / &pivot;
                for k in c..ncols {
                    let sub = &factor * &rows[r][k];
                    rows[i][k] -= sub;
                }
            }
        }
        r += 1;
    }
    r
}

/// Whether `h = Σ c_i g_i` with every `deg(c_i g_i) ≤ max_deg`, decided by
/// linear algebra on coefficient vectors.
pub fn dense_member(nvars: usize, gens: &[Poly<Q>], h: &Poly<Q>, max_deg: u32) -> bool {
    let monos = monomials(nvars, max_deg);
    let index: HashMap<Mono, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    if h.terms().any(|(m, _)| !index.contains_key(m)) {
        return false;
    }
    let mut columns: Vec<Vec<Q>> = Vec::new();
    for g in gens.iter().filter(|g| !g.is_zero()) {
        let d = g.total_degree().unwrap_or(0);
        if d > max_deg {
            continue;
        }
        for m in monomials(nvars, max_deg - d) {
            let p = g.mul_term(&m, &Q::one());
            let mut col = vec![Q::zero(); monos.len()];
            for (mono, c) in p.terms() {
                col[index[mono]] = c.clone();
            }
            columns.push(col);
        }
    }
    let mut target = vec![Q::zero(); monos.len()];
    for (m, c) in h.terms() {
        target[index[m]] = c.clone();
    }
    let to_rows = |cols: &[Vec<Q>]| -> Vec<Vec<Q>> {
        (0..monos.len()).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
    };
    let base = rank(to_rows(&columns));
    columns.push(target);
    rank(to_rows(&columns)) == base
}

/// A random polynomial with small integer coefficients. With `homogeneous`
/// every term has degree exactly `max_deg`.
pub fn random_poly(rng: &mut impl Rng, nvars: usize, max_deg: u32, homogeneous: bool, nterms: usize) -> Poly<Q> {
    let pool: Vec<Mono> =
        monomials(nvars, max_deg).into_iter().filter(|m| !homogeneous || m.degree() == max_deg).collect();
    let mut p = Poly::zero(nvars);
    for _ in 0..nterms {
        let m = pool[rng.gen_range(0..pool.len())].clone();
        let c = Q::from_i64(rng.gen_range(-3..=3));
        p = p.add(&Poly::term(m, c));
    }
    p
}

/// Number of isomorphism classes of posets on `n` points, by listing every
/// labelled strict order and taking the least relabelling as canonical form.
pub fn count_posets(n: usize) -> usize {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect();
    let perms = tricat::spectral_space::permutations(n);
    let mut classes = BTreeSet::new();
    for mask in 0u32..(1u32 << pairs.len()) {
        let rel = |a: usize, b: usize| -> bool {
            a != b && pairs.iter().position(|&p| p == (a, b)).is_some_and(|i| mask >> i & 1 == 1)
        };
        let ok = (0..n).all(|a| {
            (0..n).all(|b| {
                !(rel(a, b) && rel(b, a)) && (0..n).all(|c| !(rel(a, b) && rel(b, c)) || rel(a, c))
            })
        });
        if !ok {
            continue;
        }
        let canon = perms
            .iter()
            .map(|p| {
                let mut edges: Vec<(usize, usize)> =
                    pairs.iter().filter(|&&(a, b)| rel(a, b)).map(|&(a, b)| (p[a], p[b])).collect();
                edges.sort();
                edges
            })
            .min()
            .expect("at least one permutation");
        classes.insert(canon);
    }
    classes.len()
}

/// Subsets of points that contain the closure of each of their points,
/// found by checking every subset.
pub fn count_specialization_closed(space: &tricat::spectral_space::SpecSpace) -> usize {
    let n = space.len();
    (0u32..(1 << n))
        .filter(|s| {
            (0..n).all(|p| s >> p & 1 == 0 || (0..n).all(|q| !space.specializes(q, p) || s >> q & 1 == 1))
        })
        .count()
}
