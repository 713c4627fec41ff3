//! Buchberger's algorithm for submodules of `S^r`.
//!
//! Vectors are lists of terms `c·m·e_k` kept in descending position-over-term
//! order: a smaller component index is larger, ties are broken by the
//! monomial order. Ideals are the case `r = 1`.
//!
//! With tracking, each generator `f_i ∈ S^r` is extended to `(f_i, e_i) ∈
//! S^{r+k}`. Since every tracking component sorts below every original one,
//! basis elements with a nonzero leading part carry cofactors for their
//! leading part, and those whose original part vanishes generate the
//! syzygies of the `f_i`.

use std::cmp::Ordering;
use std::collections::HashSet;

use super::field::Field;
use super::poly::{Mono, MonoOrder, Poly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term<C> {
    pub mono: Mono,
    pub comp: usize,
    pub coef: C,
}

/// Nonzero terms in strictly descending module order.
pub type Vector<C> = Vec<Term<C>>;

fn cmp_pos(order: MonoOrder, a: (&Mono, usize), b: (&Mono, usize)) -> Ordering {
    b.1.cmp(&a.1).then_with(|| order.cmp(a.0, b.0))
}

fn cmp_terms<C>(order: MonoOrder, a: &Term<C>, b: &Term<C>) -> Ordering {
    cmp_pos(order, (&a.mono, a.comp), (&b.mono, b.comp))
}

/// `a + c·m·b`.
fn add_scaled<C: Field>(order: MonoOrder, a: &[Term<C>], b: &[Term<C>], c: &C, m: &Mono) -> Vector<C> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let mut bt = |t: &Term<C>| Term { mono: t.mono.mul(m), comp: t.comp, coef: t.coef.mul(c) };
    let mut pending_b = b.first().map(&mut bt);
    while i < a.len() || pending_b.is_some() {
        match (a.get(i), pending_b.as_ref()) {
            (Some(x), Some(y)) => match cmp_terms(order, x, y) {
                Ordering::Greater => {
                    out.push(x.clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(pending_b.take().expect("present"));
                    j += 1;
                    pending_b = b.get(j).map(&mut bt);
                }
                Ordering::Equal => {
                    let s = x.coef.add(&y.coef);
                    if !s.is_zero() {
                        out.push(Term { mono: x.mono.clone(), comp: x.comp, coef: s });
                    }
                    i += 1;
                    j += 1;
                    pending_b = b.get(j).map(&mut bt);
                }
            },
            (Some(x), None) => {
                out.push(x.clone());
                i += 1;
            }
            (None, Some(_)) => {
                out.push(pending_b.take().expect("present"));
                j += 1;
                pending_b = b.get(j).map(&mut bt);
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

fn make_monic<C: Field>(v: &mut Vector<C>) {
    if let Some(lead) = v.first() {
        if !lead.coef.is_one() {
            let inv = lead.coef.inv();
            for t in v.iter_mut() {
                t.coef = t.coef.mul(&inv);
            }
        }
    }
}

/// Converts polynomial coordinates into a sorted vector, placing
/// coordinate `k` in component `offset + k`.
pub fn to_vector<C: Field>(order: MonoOrder, coords: &[Poly<C>], offset: usize) -> Vector<C> {
    let mut out: Vector<C> = Vec::new();
    for (k, p) in coords.iter().enumerate() {
        for (m, c) in p.terms() {
            out.push(Term { mono: m.clone(), comp: offset + k, coef: c.clone() });
        }
    }
    out.sort_by(|a, b| cmp_terms(order, b, a));
    out
}

/// Coordinates `offset .. offset + len` of a vector.
pub fn from_vector<C: Field>(nvars: usize, v: &[Term<C>], offset: usize, len: usize) -> Vec<Poly<C>> {
    let mut out = vec![Poly::zero(nvars); len];
    for t in v {
        if t.comp >= offset && t.comp < offset + len {
            out[t.comp - offset].add_term(t.mono.clone(), t.coef.clone());
        }
    }
    out
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Mono,
    comp: usize,
}

/// Reduced Gröbner basis of the submodule generated by `gens`, sorted in
/// ascending order of leading terms. `product_criterion` may only be set
/// for ideals (all terms in component 0).
pub fn groebner<C: Field>(order: MonoOrder, gens: Vec<Vector<C>>, product_criterion: bool) -> Vec<Vector<C>> {
    let mut basis: Vec<Vector<C>> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    let mut live: Vec<bool> = Vec::new();

    let push = |v: Vector<C>, basis: &mut Vec<Vector<C>>, pairs: &mut Vec<Pair>, pending: &mut HashSet<(usize, usize)>, live: &mut Vec<bool>| {
        let j = basis.len();
        let (lm, lc) = (&v[0].mono, v[0].comp);
        for (i, g) in basis.iter().enumerate() {
            if live[i] && g[0].comp == lc {
                pairs.push(Pair { i, j, lcm: g[0].mono.lcm(lm), comp: lc });
                pending.insert((i, j));
            }
        }
        basis.push(v);
        live.push(true);
    };

    for g in gens {
        let mut r = reduce(order, &g, &basis, |_| true);
        if !r.is_empty() {
            make_monic(&mut r);
            push(r, &mut basis, &mut pairs, &mut pending, &mut live);
        }
    }

    while !pairs.is_empty() {
        // normal strategy: smallest lcm first, ties by index
        let mut best = 0;
        for k in 1..pairs.len() {
            let (a, b) = (&pairs[k], &pairs[best]);
            let c = cmp_pos(order, (&a.lcm, a.comp), (&b.lcm, b.comp)).then((a.i, a.j).cmp(&(b.i, b.j)));
            if c == Ordering::Less {
                best = k;
            }
        }
        let pair = pairs.swap_remove(best);
        pending.remove(&(pair.i, pair.j));
        let (gi, gj) = (&basis[pair.i], &basis[pair.j]);
        if product_criterion && gi[0].mono.coprime(&gj[0].mono) {
            continue;
        }
        let chain = (0..basis.len()).any(|k| {
            k != pair.i
                && k != pair.j
                && basis[k][0].comp == pair.comp
                && basis[k][0].mono.divides(&pair.lcm)
                && !pending.contains(&(pair.i.min(k), pair.i.max(k)))
                && !pending.contains(&(pair.j.min(k), pair.j.max(k)))
        });
        if chain {
            continue;
        }
        let mi = gi[0].mono.quotient_of(&pair.lcm);
        let mj = gj[0].mono.quotient_of(&pair.lcm);
        let si: Vector<C> = add_scaled(order, &[], gi, &C::one(), &mi);
        let s = add_scaled(order, &si, gj, &C::one().neg(), &mj);
        let mut r = reduce(order, &s, &basis, |_| true);
        if !r.is_empty() {
            make_monic(&mut r);
            push(r, &mut basis, &mut pairs, &mut pending, &mut live);
        }
    }
    reduce_basis(order, basis)
}

/// Minimalizes, tail-reduces, normalizes and sorts a Gröbner basis.
pub fn reduce_basis<C: Field>(order: MonoOrder, mut basis: Vec<Vector<C>>) -> Vec<Vector<C>> {
    basis.sort_by(|a, b| cmp_terms(order, &a[0], &b[0]));
    let mut minimal: Vec<Vector<C>> = Vec::new();
    for g in basis {
        let redundant = minimal
            .iter()
            .any(|h| h[0].comp == g[0].comp && h[0].mono.divides(&g[0].mono));
        if !redundant {
            minimal.push(g);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<Vector<C>> =
            minimal.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, g)| g.clone()).collect();
        let head = minimal[k][0].clone();
        let tail = reduce(order, &minimal[k][1..], &others, |_| true);
        let mut g = vec![head];
        g.extend(tail);
        make_monic(&mut g);
        out.push(g);
    }
    out.sort_by(|a, b| cmp_terms(order, &a[0], &b[0]));
    out
}

/// Full reduction of `v` by `basis`: every term whose component satisfies
/// `reducible` and whose monomial is divisible by a leading term of the
/// same component is eliminated.
pub fn reduce<C: Field>(
    order: MonoOrder,
    v: &[Term<C>],
    basis: &[Vector<C>],
    reducible: impl Fn(usize) -> bool,
) -> Vector<C> {
    reduce_tracked(order, v, basis, reducible).0
}

/// Like [`reduce`], also returning the quotient `q_k` for each basis element,
/// so that `v = Σ q_k·basis[k] + remainder`.
pub fn reduce_tracked<C: Field>(
    order: MonoOrder,
    v: &[Term<C>],
    basis: &[Vector<C>],
    reducible: impl Fn(usize) -> bool,
) -> (Vector<C>, Vec<Vec<(Mono, C)>>) {
    let mut rem: Vector<C> = Vec::new();
    let mut p: Vector<C> = v.to_vec();
    let mut quotients: Vec<Vec<(Mono, C)>> = vec![Vec::new(); basis.len()];
    let mut start = 0;
    while start < p.len() {
        let t = &p[start];
        let hit = if reducible(t.comp) {
            basis.iter().position(|g| g[0].comp == t.comp && g[0].mono.divides(&t.mono))
        } else {
            None
        };
        match hit {
            Some(k) => {
                let g = &basis[k];
                let m = g[0].mono.quotient_of(&t.mono);
                let c = t.coef.mul(&g[0].coef.inv());
                quotients[k].push((m.clone(), c.clone()));
                // leading terms cancel; everything before `start` is final
                let tail = add_scaled(order, &p[start..], g, &c.neg(), &m);
                p.truncate(start);
                p.extend(tail);
            }
            None => {
                start += 1;
            }
        }
    }
    // p now holds only irreducible terms
    rem.extend(p);
    (rem, quotients)
}

/// A Gröbner basis of a submodule of `S^rank`, optionally tracking
/// cofactors with respect to the original generators.
#[derive(Clone, Debug)]
pub struct ModuleGb<C> {
    nvars: usize,
    rank: usize,
    ngens: usize,
    order: MonoOrder,
    tracked: bool,
    /// Reduced basis of the (possibly extended) module.
    basis: Vec<Vector<C>>,
}

impl<C: Field> ModuleGb<C> {
    /// `gens[i]` is a column of `rank` coordinates.
    pub fn new(nvars: usize, rank: usize, gens: &[Vec<Poly<C>>], order: MonoOrder, tracked: bool) -> Self {
        let vectors: Vec<Vector<C>> = gens
            .iter()
            .enumerate()
            .map(|(i, g)| {
                assert_eq!(g.len(), rank, "generator has wrong length");
                let mut v = to_vector(order, g, 0);
                if tracked {
                    v.push(Term { mono: Mono::one(nvars), comp: rank + i, coef: C::one() });
                }
                v
            })
            .collect();
        let ideal_mode = rank == 1 && !tracked;
        let basis = groebner(order, vectors, ideal_mode);
        ModuleGb { nvars, rank, ngens: gens.len(), order, tracked, basis }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    fn leading_part(&self) -> impl Iterator<Item = &Vector<C>> {
        let r = self.rank;
        self.basis.iter().filter(move |g| g[0].comp < r)
    }

    /// Gröbner basis of the submodule itself (original coordinates).
    pub fn basis(&self) -> Vec<Vec<Poly<C>>> {
        self.leading_part().map(|g| from_vector(self.nvars, g, 0, self.rank)).collect()
    }

    fn proper_basis(&self) -> Vec<Vector<C>> {
        self.leading_part().cloned().collect()
    }

    /// Normal form of a vector with respect to the submodule.
    pub fn normal_form(&self, v: &[Poly<C>]) -> Vec<Poly<C>> {
        let r = self.rank;
        let rem = reduce(self.order, &to_vector(self.order, v, 0), &self.proper_basis(), |c| c < r);
        from_vector(self.nvars, &rem, 0, r)
    }

    pub fn contains(&self, v: &[Poly<C>]) -> bool {
        self.normal_form(v).iter().all(Poly::is_zero)
    }

    /// Cofactors `c` with `v = Σ c_i·gens[i]`, when `v` is a member.
    pub fn lift(&self, v: &[Poly<C>]) -> Option<Vec<Poly<C>>> {
        assert!(self.tracked, "lift needs a tracked basis");
        let r = self.rank;
        let basis = self.proper_basis();
        let (rem, quotients) = reduce_tracked(self.order, &to_vector(self.order, v, 0), &basis, |c| c < r);
        if rem.iter().any(|t| t.comp < r) {
            return None;
        }
        let mut cof = vec![Poly::zero(self.nvars); self.ngens];
        for (k, qs) in quotients.iter().enumerate() {
            let h = from_vector(self.nvars, &basis[k], r, self.ngens);
            for (m, c) in qs {
                for (i, hi) in h.iter().enumerate() {
                    cof[i] = cof[i].add(&hi.mul_term(m, c));
                }
            }
        }
        Some(cof)
    }

    /// Generators of the syzygy module `{c : Σ c_i·gens[i] = 0}`, as a
    /// Gröbner basis in the induced order.
    pub fn syzygies(&self) -> Vec<Vec<Poly<C>>> {
        assert!(self.tracked, "syzygies need a tracked basis");
        let r = self.rank;
        self.basis
            .iter()
            .filter(|g| g[0].comp >= r)
            .map(|g| from_vector(self.nvars, g, r, self.ngens))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::field::Q;
    use crate::polyalg::parse::Ring;

    fn polys(r: &Ring, ss: &[&str]) -> Vec<Poly<Q>> {
        ss.iter().map(|s| r.parse(s).unwrap()).collect()
    }

    #[test]
    fn syzygies_of_two_monomials() {
        let r = Ring::new(&["x", "y"]);
        let g = polys(&r, &["x", "y"]);
        let gens: Vec<Vec<Poly<Q>>> = g.iter().map(|p| vec![p.clone()]).collect();
        let gb = ModuleGb::new(2, 1, &gens, MonoOrder::GrevLex, true);
        let syz = gb.syzygies();
        assert_eq!(syz.len(), 1);
        let s = &syz[0];
        assert!(s[0].mul(&g[0]).add(&s[1].mul(&g[1])).is_zero());
        let cof = gb.lift(&[r.parse("x^2 + 3*y").unwrap()]).unwrap();
        let back = cof[0].mul(&g[0]).add(&cof[1].mul(&g[1]));
        assert_eq!(back, r.parse("x^2 + 3*y").unwrap());
        assert!(gb.lift(&[r.parse("1").unwrap()]).is_none());
    }

    #[test]
    fn module_membership() {
        // submodule of S^2 generated by (x, y) and (y, x)
        let r = Ring::new(&["x", "y"]);
        let gens = vec![polys(&r, &["x", "y"]), polys(&r, &["y", "x"])];
        let gb = ModuleGb::new(2, 2, &gens, MonoOrder::GrevLex, true);
        let target = polys(&r, &["x^2 - y^2", "0"]);
        let cof = gb.lift(&target).unwrap();
        for k in 0..2 {
            let lhs = cof[0].mul(&gens[0][k]).add(&cof[1].mul(&gens[1][k]));
            assert_eq!(lhs, target[k]);
        }
        assert!(!gb.contains(&polys(&r, &["x", "0"])));
        for s in gb.syzygies() {
            for k in 0..2 {
                assert!(s[0].mul(&gens[0][k]).add(&s[1].mul(&gens[1][k])).is_zero());
            }
        }
    }
}
