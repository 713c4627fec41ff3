use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use super::field::Field;
use super::PolyError;

/// Exponent vector. The derived order is lex with the first variable largest.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Mono(pub SmallVec<[u32; 8]>);

impl Mono {
    pub fn one(nvars: usize) -> Mono {
        Mono(SmallVec::from_elem(0, nvars))
    }

    pub fn var(nvars: usize, i: usize) -> Mono {
        let mut m = Mono::one(nvars);
        m.0[i] = 1;
        m
    }

    pub fn from_exps(e: &[u32]) -> Mono {
        Mono(SmallVec::from_slice(e))
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| b - a).collect())
    }

    pub fn lcm(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub enum MonoOrder {
    Lex,
    #[default]
    GrevLex,
}

impl MonoOrder {
    pub fn cmp(self, a: &Mono, b: &Mono) -> Ordering {
        match self {
            MonoOrder::Lex => a.0.cmp(&b.0),
            MonoOrder::GrevLex => a.degree().cmp(&b.degree()).then_with(|| {
                for i in (0..a.0.len()).rev() {
                    if a.0[i] != b.0[i] {
                        return b.0[i].cmp(&a.0[i]);
                    }
                }
                Ordering::Equal
            }),
        }
    }
}

/// Sparse polynomial in a fixed number of variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly<C> {
    nvars: usize,
    terms: BTreeMap<Mono, C>,
}

impl<C: Field> Poly<C> {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::term(Mono::one(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    pub fn from_i64(nvars: usize, n: i64) -> Self {
        Self::constant(nvars, C::from_i64(n))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::term(Mono::var(nvars, i), C::one())
    }

    pub fn term(mono: Mono, c: C) -> Self {
        let nvars = mono.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mono, c);
        }
        Poly { nvars, terms }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Mono, C)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Mono::is_one)
    }

    /// The constant value, if the polynomial is constant.
    pub fn constant_value(&self) -> Option<C> {
        if self.is_zero() {
            Some(C::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Mono) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Mono::degree).max()
    }

    pub fn add_term(&mut self, m: Mono, c: C) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = v.add(&c);
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(m, d)| (m.clone(), d.mul(c))).collect() }
    }

    pub fn mul_term(&self, mono: &Mono, c: &C) -> Self {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, d)| (m.mul(mono), d.mul(c))).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            for (n, d) in &other.terms {
                out.add_term(m.mul(n), c.mul(d));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `∂/∂x_i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e > 0 {
                let mut n = m.clone();
                n.0[i] -= 1;
                out.add_term(n, c.mul(&C::from_i64(e as i64)));
            }
        }
        out
    }

    /// Substitutes `images[i]` for `x_i`; the images share a ring of any size.
    pub fn substitute(&self, images: &[Poly<C>]) -> Result<Poly<C>, PolyError> {
        if images.len() != self.nvars {
            return Err(PolyError::RingMismatch(format!(
                "{} images for {} variables",
                images.len(),
                self.nvars
            )));
        }
        let target = images.first().map_or(0, |p| p.nvars);
        if images.iter().any(|p| p.nvars != target) {
            return Err(PolyError::RingMismatch("images live in different rings".into()));
        }
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&images[i].pow(e));
                }
            }
            out = out.add(&t);
        }
        Ok(out)
    }

    /// Reinterprets the polynomial in `nvars` variables, sending `x_i` to
    /// `x_{map[i]}`.
    pub fn rename(&self, nvars: usize, map: &[usize]) -> Self {
        let mut out = Poly::zero(nvars);
        for (m, c) in &self.terms {
            let mut e = Mono::one(nvars);
            for (i, &k) in m.0.iter().enumerate() {
                e.0[map[i]] += k;
            }
            out.add_term(e, c.clone());
        }
        out
    }

    /// Same polynomial in a ring with `extra` more variables appended.
    pub fn extend(&self, extra: usize) -> Self {
        let map: Vec<usize> = (0..self.nvars).collect();
        self.rename(self.nvars + extra, &map)
    }

    pub fn leading(&self, order: MonoOrder) -> Option<(&Mono, &C)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    pub fn monic(&self, order: MonoOrder) -> Self {
        match self.leading(order) {
            Some((_, c)) => self.scale(&c.inv()),
            None => self.clone(),
        }
    }

    /// Terms in descending order.
    pub fn sorted_terms(&self, order: MonoOrder) -> Vec<(&Mono, &C)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| order.cmp(b.0, a.0));
        v
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.0[i] > 0)
    }

    pub fn display<'a>(&'a self, vars: &'a [String]) -> PolyDisplay<'a, C> {
        PolyDisplay { poly: self, vars }
    }
}

pub struct PolyDisplay<'a, C> {
    poly: &'a Poly<C>,
    vars: &'a [String],
}

impl<C: Field> fmt::Display for PolyDisplay<'_, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.poly.sorted_terms(MonoOrder::GrevLex).into_iter().enumerate() {
            let (neg, mag) = if c.is_negative() { (true, c.neg()) } else { (false, c.clone()) };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let factors: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { self.vars[i].clone() } else { format!("{}^{}", self.vars[i], e) })
                .collect();
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::field::Q;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn grevlex_and_lex() {
        let x2 = Mono::from_exps(&[2, 0, 0]);
        let xy = Mono::from_exps(&[1, 1, 0]);
        let z = Mono::from_exps(&[0, 0, 1]);
        let y2 = Mono::from_exps(&[0, 2, 0]);
        let xz = Mono::from_exps(&[1, 0, 1]);
        assert_eq!(MonoOrder::GrevLex.cmp(&x2, &xy), Ordering::Greater);
        assert_eq!(MonoOrder::GrevLex.cmp(&xy, &z), Ordering::Greater);
        assert_eq!(MonoOrder::GrevLex.cmp(&y2, &xz), Ordering::Greater);
        assert_eq!(MonoOrder::Lex.cmp(&z, &xy), Ordering::Less);
        assert_eq!(MonoOrder::Lex.cmp(&xz, &y2), Ordering::Greater);
    }

    #[test]
    fn display_and_derivative() {
        let x: Poly<Q> = Poly::var(3, 0);
        let y: Poly<Q> = Poly::var(3, 1);
        let z: Poly<Q> = Poly::var(3, 2);
        let f = x.mul(&x).mul(&y).add(&z.mul(&z));
        let names = vars(&["x", "y", "z"]);
        assert_eq!(f.display(&names).to_string(), "x^2*y + z^2");
        assert_eq!(f.derivative(0).display(&names).to_string(), "2*x*y");
        let g = Poly::from_i64(3, 1).sub(&x.scale(&Q::from_i64(3)));
        assert_eq!(g.display(&names).to_string(), "-3*x + 1");
    }

    #[test]
    fn substitution() {
        let y: Poly<Q> = Poly::var(2, 0);
        let w: Poly<Q> = Poly::var(2, 1);
        let f = w.mul(&w).add(&y);
        let target_w: Poly<Q> = Poly::var(1, 0);
        let img = f.substitute(&[target_w.mul(&target_w).neg(), target_w.clone()]).unwrap();
        assert!(img.is_zero());
    }
}
