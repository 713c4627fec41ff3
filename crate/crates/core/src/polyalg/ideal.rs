use std::sync::OnceLock;

use super::field::Field;
use super::groebner::{self, from_vector, to_vector, Vector};
use super::poly::{Mono, MonoOrder, Poly};
use super::PolyError;

/// A reduced Gröbner basis of an ideal, sorted by ascending leading term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis<C> {
    nvars: usize,
    order: MonoOrder,
    polys: Vec<Poly<C>>,
    vectors: Vec<Vector<C>>,
}

impl<C: Field> GroebnerBasis<C> {
    pub fn compute(nvars: usize, gens: &[Poly<C>], order: MonoOrder) -> Self {
        let vectors: Vec<Vector<C>> = gens
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| to_vector(order, std::slice::from_ref(g), 0))
            .collect();
        let vectors = groebner::groebner(order, vectors, true);
        let polys = vectors.iter().map(|v| from_vector(nvars, v, 0, 1).remove(0)).collect();
        GroebnerBasis { nvars, order, polys, vectors }
    }

    pub fn polys(&self) -> &[Poly<C>] {
        &self.polys
    }

    pub fn order(&self) -> MonoOrder {
        self.order
    }

    pub fn normal_form(&self, f: &Poly<C>) -> Poly<C> {
        let v = to_vector(self.order, std::slice::from_ref(f), 0);
        let r = groebner::reduce(self.order, &v, &self.vectors, |_| true);
        from_vector(self.nvars, &r, 0, 1).remove(0)
    }

    /// Quotients and remainder of multivariate division:
    /// `f = Σ q_k·polys[k] + r`.
    pub fn divide(&self, f: &Poly<C>) -> (Vec<Poly<C>>, Poly<C>) {
        let v = to_vector(self.order, std::slice::from_ref(f), 0);
        let (r, qs) = groebner::reduce_tracked(self.order, &v, &self.vectors, |_| true);
        let q = qs.into_iter().map(|terms| Poly::from_terms(self.nvars, terms)).collect();
        (q, from_vector(self.nvars, &r, 0, 1).remove(0))
    }

    pub fn is_unit(&self) -> bool {
        self.polys.len() == 1 && self.polys[0].is_constant() && !self.polys[0].is_zero()
    }
}

/// An ideal of `C[x_0, .., x_{n-1}]` with a cached grevlex basis.
#[derive(Clone, Debug)]
pub struct Ideal<C> {
    nvars: usize,
    gens: Vec<Poly<C>>,
    gb: OnceLock<GroebnerBasis<C>>,
}

impl<C: Field> Ideal<C> {
    pub fn new(nvars: usize, gens: Vec<Poly<C>>) -> Self {
        assert!(gens.iter().all(|g| g.nvars() == nvars), "generator in a different ring");
        Ideal { nvars, gens, gb: OnceLock::new() }
    }

    pub fn zero(nvars: usize) -> Self {
        Self::new(nvars, Vec::new())
    }

    pub fn unit(nvars: usize) -> Self {
        Self::new(nvars, vec![Poly::one(nvars)])
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn gens(&self) -> &[Poly<C>] {
        &self.gens
    }

    pub fn groebner(&self) -> &GroebnerBasis<C> {
        self.gb.get_or_init(|| GroebnerBasis::compute(self.nvars, &self.gens, MonoOrder::GrevLex))
    }

    pub fn groebner_with(&self, order: MonoOrder) -> GroebnerBasis<C> {
        if order == MonoOrder::GrevLex {
            self.groebner().clone()
        } else {
            GroebnerBasis::compute(self.nvars, &self.gens, order)
        }
    }

    pub fn normal_form(&self, f: &Poly<C>) -> Poly<C> {
        self.groebner().normal_form(f)
    }

    pub fn contains(&self, f: &Poly<C>) -> bool {
        self.normal_form(f).is_zero()
    }

    pub fn contains_ideal(&self, other: &Ideal<C>) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    pub fn is_unit(&self) -> bool {
        self.groebner().is_unit()
    }

    pub fn same_ideal(&self, other: &Ideal<C>) -> bool {
        self.groebner().polys == other.groebner().polys
    }

    pub fn sum(&self, other: &Ideal<C>) -> Result<Ideal<C>, PolyError> {
        self.check_ring(other)?;
        Ok(Ideal::new(self.nvars, self.gens.iter().chain(&other.gens).cloned().collect()))
    }

    fn check_ring(&self, other: &Ideal<C>) -> Result<(), PolyError> {
        if self.nvars != other.nvars {
            return Err(PolyError::RingMismatch(format!(
                "{} versus {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    /// `g ∈ √I` by testing `1 ∈ I + (1 − t·g)` with a fresh variable `t`.
    pub fn radical_member(&self, g: &Poly<C>) -> bool {
        let n = self.nvars;
        let t = Poly::var(n + 1, n);
        let mut gens: Vec<Poly<C>> = self.gens.iter().map(|f| f.extend(1)).collect();
        gens.push(Poly::one(n + 1).sub(&t.mul(&g.extend(1))));
        GroebnerBasis::compute(n + 1, &gens, MonoOrder::GrevLex).is_unit()
    }

    /// `√I ⊆ √J`, generator by generator.
    pub fn radical_contained_in(&self, other: &Ideal<C>) -> Result<bool, PolyError> {
        self.check_ring(other)?;
        Ok(self.gens.iter().all(|g| other.radical_member(g)))
    }

    /// `V(I) = V(J)`: every generator of each is in the radical of the other.
    pub fn equal_up_to_radical(&self, other: &Ideal<C>) -> Result<bool, PolyError> {
        Ok(self.radical_contained_in(other)? && other.radical_contained_in(self)?)
    }

    /// `I ∩ C[remaining variables]`, still expressed in all `nvars`
    /// variables, via a lex basis with the eliminated variables largest.
    pub fn eliminate(&self, vars: &[usize]) -> Ideal<C> {
        let n = self.nvars;
        let mut perm: Vec<usize> = vars.to_vec();
        perm.sort_unstable();
        perm.dedup();
        let k = perm.len();
        perm.extend((0..n).filter(|i| !vars.contains(i)));
        // to_new[old] = position of old variable in the permuted ring
        let mut to_new = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            to_new[old] = new;
        }
        let permuted: Vec<Poly<C>> = self.gens.iter().map(|g| g.rename(n, &to_new)).collect();
        let gb = GroebnerBasis::compute(n, &permuted, MonoOrder::Lex);
        let kept: Vec<Poly<C>> = gb
            .polys
            .iter()
            .filter(|p| (0..k).all(|i| !p.uses_var(i)))
            .map(|p| p.rename(n, &perm))
            .collect();
        Ideal::new(n, kept)
    }

    /// Keeps only the listed variables, renumbered in order. Generators
    /// must not involve the dropped variables.
    pub fn restrict(&self, keep: &[usize]) -> Result<Ideal<C>, PolyError> {
        let mut map = vec![usize::MAX; self.nvars];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = new;
        }
        let mut out = Vec::new();
        for g in &self.gens {
            for (m, _) in g.terms() {
                if m.0.iter().enumerate().any(|(i, &e)| e > 0 && map[i] == usize::MAX) {
                    return Err(PolyError::RingMismatch("generator uses a dropped variable".into()));
                }
            }
            let mut p = Poly::zero(keep.len());
            for (m, c) in g.terms() {
                let mut e = Mono::one(keep.len());
                for (i, &k) in m.0.iter().enumerate() {
                    if k > 0 {
                        e.0[map[i]] = k;
                    }
                }
                p.add_term(e, c.clone());
            }
            out.push(p);
        }
        Ok(Ideal::new(keep.len(), out))
    }
}

/// `(f, ∂f/∂x_0, .., ∂f/∂x_{n-1})`. In characteristic `p`, a variable some
/// nonzero exponent of which is divisible by `p` is rejected, since its
/// partial derivative loses information.
pub fn jacobian_ideal<C: Field>(f: &Poly<C>) -> Result<Ideal<C>, PolyError> {
    let p = C::characteristic();
    let n = f.nvars();
    if p != 0 {
        for i in 0..n {
            if f.terms().any(|(m, _)| m.0[i] > 0 && u64::from(m.0[i]) % p == 0) {
                return Err(PolyError::Characteristic { var: i, p });
            }
        }
    }
    let mut gens = vec![f.clone()];
    gens.extend((0..n).map(|i| f.derivative(i)));
    Ok(Ideal::new(n, gens))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::field::{Fp, Q};
    use crate::polyalg::parse::Ring;

    fn ideal(r: &Ring, gens: &[&str]) -> Ideal<Q> {
        Ideal::new(r.nvars(), gens.iter().map(|s| r.parse(s).unwrap()).collect())
    }

    fn shown(r: &Ring, gb: &GroebnerBasis<Q>) -> Vec<String> {
        gb.polys().iter().map(|p| r.show(p)).collect()
    }

    #[test]
    fn basis_examples() {
        let r2 = Ring::new(&["x", "y"]);
        assert_eq!(shown(&r2, ideal(&r2, &["x"]).groebner()), vec!["x"]);
        let r = Ring::new(&["x", "y", "z"]);
        assert_eq!(shown(&r, ideal(&r, &["x^2", "2*x*y", "2*z"]).groebner()), vec!["z", "x*y", "x^2"]);
        assert_eq!(shown(&r, ideal(&r, &["1", "x"]).groebner()), vec!["1"]);
    }

    #[test]
    fn normal_forms() {
        let r = Ring::new(&["x", "y", "z"]);
        let i = ideal(&r, &["x"]);
        assert!(i.normal_form(&r.parse("x^2").unwrap()).is_zero());
        assert_eq!(r.show(&i.normal_form(&r.parse("y").unwrap())), "y");
        let j = ideal(&r, &["z", "x*y", "x^2"]);
        assert!(j.normal_form(&r.parse("x^2*y + z^2").unwrap()).is_zero());
    }

    #[test]
    fn division_identity() {
        let r = Ring::new(&["x", "y", "z"]);
        let i = ideal(&r, &["x^2 - y", "x*y - z"]);
        let f: Poly<Q> = r.parse("x^3*y + z^2 - 7*x + y^2").unwrap();
        let gb = i.groebner();
        let (q, rem) = gb.divide(&f);
        let mut sum = rem.clone();
        for (qk, gk) in q.iter().zip(gb.polys()) {
            sum = sum.add(&qk.mul(gk));
        }
        assert_eq!(sum, f);
        assert_eq!(gb.normal_form(&rem), rem);
    }

    #[test]
    fn radical_membership() {
        let r = Ring::new(&["x", "y", "z"]);
        assert!(ideal(&r, &["x^2"]).radical_member(&r.parse("x").unwrap()));
        assert!(!ideal(&r, &["x^2"]).radical_member(&r.parse("y").unwrap()));
        let j = ideal(&r, &["x^2*y + z^2", "2*x*y", "x^2", "2*z"]);
        assert!(j.radical_member(&r.parse("x").unwrap()));
    }

    #[test]
    fn jacobians() {
        let r = Ring::new(&["x", "y", "z"]);
        let j = jacobian_ideal(&r.parse::<Q>("x^2*y + z^2").unwrap()).unwrap();
        assert!(j.equal_up_to_radical(&ideal(&r, &["x", "z"])).unwrap());
        let smooth = jacobian_ideal(&r.parse::<Q>("x").unwrap()).unwrap();
        assert!(smooth.is_unit());
        let r2 = Ring::new(&["x", "y"]);
        let jx = jacobian_ideal(&r2.parse::<Q>("x^2").unwrap()).unwrap();
        assert!(jx.equal_up_to_radical(&ideal(&r2, &["x"])).unwrap());
        let f: Poly<Fp<2>> = r2.parse("x^2 + y").unwrap();
        assert!(matches!(jacobian_ideal(&f), Err(PolyError::Characteristic { var: 0, p: 2 })));
    }

    #[test]
    fn radical_equality_examples() {
        let r = Ring::new(&["x", "y"]);
        assert!(ideal(&r, &["x^2"]).equal_up_to_radical(&ideal(&r, &["x"])).unwrap());
        assert!(!ideal(&r, &["x"]).equal_up_to_radical(&ideal(&r, &["y"])).unwrap());
        let other = Ideal::<Q>::zero(3);
        assert!(ideal(&r, &["x"]).equal_up_to_radical(&other).is_err());
    }

    #[test]
    fn elimination() {
        let r = Ring::new(&["x", "u", "v"]);
        let i = ideal(&r, &["u", "v", "x^2 + u*v"]);
        let e = i.eliminate(&[1, 2]);
        assert!(e.same_ideal(&ideal(&r, &["x^2"])));
        let r2 = Ring::new(&["x", "y"]);
        assert!(ideal(&r2, &["x - y"]).eliminate(&[0]).gens().is_empty());
        let i2 = ideal(&r2, &["x^2 - y", "x*y"]);
        assert!(i2.eliminate(&[]).same_ideal(&i2));
    }
}
