//! Matrix factorizations of a hypersurface and their stable Hom modules.
//!
//! A factorization `(A, B)` of `f` over `S = k[x..]` has `AB = BA = f·I`
//! and stands for the maximal Cohen-Macaulay module `coker A` over
//! `R = S/(f)`. A morphism `(α0, α1): (A, B) → (A', B')` satisfies
//! `α0·A = A'·α1` and `α1·B = B'·α0`. Null-homotopic morphisms are those of
//! the form `α0 = A'·h0 + h1·B`, `α1 = h0·A + B'·h1`.
//!
//! Every module here is computed from syzygies over `S`: the cycles `Z⁰` are
//! the kernel of the linear map `(α0, α1) ↦ (α0A − A'α1, α1B − B'α0)`, and
//! quotients by submodules are presented by projecting syzygies of the
//! combined generator list.

use std::fmt;

use thiserror::Error;

use crate::polyalg::{self, Field, Ideal, ModuleGb, MonoOrder, Poly, PolyError, QuotientRing, Ring};
use crate::text::{self, ParseError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MfError {
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("(A, B) is not a matrix factorization of f")]
    NotFactorization,
    #[error("factorizations of different polynomials")]
    DifferentPotential,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T> = std::result::Result<T, MfError>;

/// Dense matrix of polynomials.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix<C> {
    nvars: usize,
    rows: usize,
    cols: usize,
    data: Vec<Poly<C>>,
}

impl<C: Field> Matrix<C> {
    pub fn zero(nvars: usize, rows: usize, cols: usize) -> Self {
        Matrix { nvars, rows, cols, data: vec![Poly::zero(nvars); rows * cols] }
    }

    pub fn identity(nvars: usize, n: usize) -> Self {
        Self::scalar(nvars, n, &Poly::one(nvars))
    }

    pub fn scalar(nvars: usize, n: usize, p: &Poly<C>) -> Self {
        let mut m = Self::zero(nvars, n, n);
        for i in 0..n {
            m.set(i, i, p.clone());
        }
        m
    }

    pub fn from_rows(nvars: usize, rows: Vec<Vec<Poly<C>>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(MfError::SizeMismatch("ragged matrix rows".into()));
        }
        Ok(Matrix { nvars, rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly<C> {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly<C>) {
        self.data[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> &[Poly<C>] {
        &self.data
    }

    pub fn from_entries(nvars: usize, rows: usize, cols: usize, data: Vec<Poly<C>>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { nvars, rows, cols, data }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product size mismatch");
        let mut out = Self::zero(self.nvars, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Poly::zero(self.nvars);
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect();
        Matrix { nvars: self.nvars, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Poly::from_i64(self.nvars, -1)))
    }

    pub fn scale(&self, p: &Poly<C>) -> Self {
        let data = self.data.iter().map(|a| a.mul(p)).collect();
        Matrix { nvars: self.nvars, rows: self.rows, cols: self.cols, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Poly::is_zero)
    }

    pub fn block_diag(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    pub fn show(&self, ring: &Ring) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let row: Vec<String> = (0..self.cols).map(|j| ring.show(self.get(i, j))).collect();
                format!("[{}]", row.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }

    /// Parses `[[a, b], [c, d]]`. Errors carry columns relative to `s`.
    pub fn parse(s: &str, ring: &Ring) -> std::result::Result<Self, ParseError> {
        let t = s.trim();
        let lead = s.len() - s.trim_start().len();
        if !(t.starts_with('[') && t.ends_with(']')) {
            return Err(ParseError::new(1, lead + 1, "expected `[[...], ...]`"));
        }
        let inner = &t[1..t.len() - 1];
        let mut rows = Vec::new();
        for (off, row) in text::split_top_level(inner, ',') {
            let base = lead + 1 + off;
            if !(row.starts_with('[') && row.ends_with(']')) {
                return Err(ParseError::new(1, base + 1, "expected a row `[...]`"));
            }
            let mut entries = Vec::new();
            for (eoff, e) in text::split_top_level(&row[1..row.len() - 1], ',') {
                let p = polyalg::parse_poly(e, &ring.vars)
                    .map_err(|err| ParseError::new(1, base + 1 + eoff + err.col, err.message))?;
                entries.push(p);
            }
            rows.push(entries);
        }
        Matrix::from_rows(ring.nvars(), rows).map_err(|e| ParseError::new(1, lead + 1, e.to_string()))
    }
}

/// A pair `(A, B)` of square matrices over `S`, meant to satisfy
/// `AB = BA = f·I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFactorization<C> {
    pub ring: Ring,
    pub f: Poly<C>,
    pub a: Matrix<C>,
    pub b: Matrix<C>,
}

impl<C: Field> MatrixFactorization<C> {
    /// Checks shapes only; see [`MatrixFactorization::check_mf`].
    pub fn new(ring: Ring, f: Poly<C>, a: Matrix<C>, b: Matrix<C>) -> Result<Self> {
        if a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows() {
            return Err(MfError::SizeMismatch(format!(
                "A is {}x{}, B is {}x{}",
                a.rows(),
                a.cols(),
                b.rows(),
                b.cols()
            )));
        }
        Ok(MatrixFactorization { ring, f, a, b })
    }

    /// Like [`MatrixFactorization::new`], also requiring `AB = BA = f·I`.
    pub fn checked(ring: Ring, f: Poly<C>, a: Matrix<C>, b: Matrix<C>) -> Result<Self> {
        let m = Self::new(ring, f, a, b)?;
        if !m.check_mf() {
            return Err(MfError::NotFactorization);
        }
        Ok(m)
    }

    pub fn rank(&self) -> usize {
        self.a.rows()
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn check_mf(&self) -> bool {
        let fi = Matrix::scalar(self.nvars(), self.rank(), &self.f);
        self.a.mul(&self.b) == fi && self.b.mul(&self.a) == fi
    }

    /// The contractible factorization `(1, f)`.
    pub fn trivial(ring: Ring, f: Poly<C>) -> Self {
        let n = ring.nvars();
        let a = Matrix::identity(n, 1);
        let b = Matrix::scalar(n, 1, &f);
        MatrixFactorization { ring, f, a, b }
    }

    /// `(B, A)`.
    pub fn shift(&self) -> Self {
        MatrixFactorization { ring: self.ring.clone(), f: self.f.clone(), a: self.b.clone(), b: self.a.clone() }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.f != other.f {
            return Err(MfError::DifferentPotential);
        }
        Ok(MatrixFactorization {
            ring: self.ring.clone(),
            f: self.f.clone(),
            a: self.a.block_diag(&other.a),
            b: self.b.block_diag(&other.b),
        })
    }

    /// `(P·A·Q⁻¹, Q·B·P⁻¹)`; the inverses are supplied, not computed.
    pub fn change_basis(&self, p: &Matrix<C>, p_inv: &Matrix<C>, q: &Matrix<C>, q_inv: &Matrix<C>) -> Self {
        MatrixFactorization {
            ring: self.ring.clone(),
            f: self.f.clone(),
            a: p.mul(&self.a).mul(q_inv),
            b: q.mul(&self.b).mul(p_inv),
        }
    }

    pub fn identity(&self) -> MfMorphism<C> {
        let id = Matrix::identity(self.nvars(), self.rank());
        MfMorphism { alpha0: id.clone(), alpha1: id }
    }

    pub fn to_text(&self) -> String {
        format!(
            "mf over {} f = {}\nA = {}\nB = {}\n",
            self.ring.decl::<C>(),
            self.ring.show(&self.f),
            self.a.show(&self.ring),
            self.b.show(&self.ring)
        )
    }

    /// Parses
    ///
    /// ```text
    /// mf over QQ[x,y,z] f = x^2*y + z^2
    /// A = [[z, x*y], [-x, z]]
    /// B = [[z, -x*y], [x, z]]
    /// ```
    pub fn parse(src: &str) -> Result<Self> {
        let lines = text::lines(src);
        let head = lines.first().ok_or_else(|| ParseError::new(1, 1, "empty factorization file"))?;
        let words = head.words();
        if words.len() < 4 || words[0].1 != "mf" || words[1].1 != "over" {
            return Err(head.error(0, "expected `mf over <field>[<vars>] f = <poly>`").into());
        }
        let decl_off = words[2].0;
        let after = &head.text[decl_off..];
        let close = after.find(']').ok_or_else(|| head.error(decl_off, "expected `]`"))?;
        let ring = Ring::parse_decl(&after[..=close], &C::name())
            .map_err(|e| head.error(decl_off + e.col - 1, e.message))?;
        let rest = &head.text[decl_off + close + 1..];
        let eq = rest.find('=').ok_or_else(|| head.error(decl_off + close + 1, "expected `f = <poly>`"))?;
        if rest[..eq].trim() != "f" {
            return Err(head.error(decl_off + close + 1, "expected `f = <poly>`").into());
        }
        let f_off = decl_off + close + 1 + eq + 1;
        let f = polyalg::parse_poly(&head.text[f_off..], &ring.vars)
            .map_err(|e| head.error(f_off + e.col - 1, e.message))?;
        let mut a = None;
        let mut b = None;
        for line in &lines[1..] {
            let eq = line.text.find('=').ok_or_else(|| line.error(0, "expected `A = ...` or `B = ...`"))?;
            let m = Matrix::parse(&line.text[eq + 1..], &ring).map_err(|e| line.error(eq + e.col, e.message))?;
            match line.text[..eq].trim() {
                "A" => a = Some(m),
                "B" => b = Some(m),
                other => return Err(line.error(0, format!("unknown matrix `{other}`")).into()),
            }
        }
        let a = a.ok_or_else(|| ParseError::new(head.number, 1, "missing `A = ...`"))?;
        let b = b.ok_or_else(|| ParseError::new(head.number, 1, "missing `B = ...`"))?;
        Self::new(ring, f, a, b)
    }
}

/// A pair `(α0, α1)`; `α0`, `α1` are `n' × n` for a map from rank `n` to
/// rank `n'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MfMorphism<C> {
    pub alpha0: Matrix<C>,
    pub alpha1: Matrix<C>,
}

impl<C: Field> MfMorphism<C> {
    pub fn zero(nvars: usize, rows: usize, cols: usize) -> Self {
        MfMorphism { alpha0: Matrix::zero(nvars, rows, cols), alpha1: Matrix::zero(nvars, rows, cols) }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        MfMorphism { alpha0: self.alpha0.mul(&other.alpha0), alpha1: self.alpha1.mul(&other.alpha1) }
    }

    pub fn add(&self, other: &Self) -> Self {
        MfMorphism { alpha0: self.alpha0.add(&other.alpha0), alpha1: self.alpha1.add(&other.alpha1) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        MfMorphism { alpha0: self.alpha0.sub(&other.alpha0), alpha1: self.alpha1.sub(&other.alpha1) }
    }

    pub fn scale(&self, p: &Poly<C>) -> Self {
        MfMorphism { alpha0: self.alpha0.scale(p), alpha1: self.alpha1.scale(p) }
    }

    pub fn is_zero(&self) -> bool {
        self.alpha0.is_zero() && self.alpha1.is_zero()
    }

    pub fn is_morphism(&self, from: &MatrixFactorization<C>, to: &MatrixFactorization<C>) -> bool {
        self.alpha0.mul(&from.a) == to.a.mul(&self.alpha1) && self.alpha1.mul(&from.b) == to.b.mul(&self.alpha0)
    }

    /// `α0` entries row-major, then `α1` entries.
    pub fn to_coords(&self) -> Vec<Poly<C>> {
        self.alpha0.entries().iter().chain(self.alpha1.entries()).cloned().collect()
    }

    pub fn from_coords(nvars: usize, rows: usize, cols: usize, v: &[Poly<C>]) -> Self {
        let k = rows * cols;
        MfMorphism {
            alpha0: Matrix::from_entries(nvars, rows, cols, v[..k].to_vec()),
            alpha1: Matrix::from_entries(nvars, rows, cols, v[k..2 * k].to_vec()),
        }
    }

    pub fn show(&self, ring: &Ring) -> String {
        format!("({}, {})", self.alpha0.show(ring), self.alpha1.show(ring))
    }
}

/// A finitely presented module `S^n / ⟨relations⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpModule<C> {
    pub nvars: usize,
    pub ngens: usize,
    /// Each relation has `ngens` coordinates.
    pub relations: Vec<Vec<Poly<C>>>,
}

impl<C: Field> FpModule<C> {
    pub fn is_zero_module(&self) -> bool {
        self.ngens == 0
    }

    /// Relation matrix with one column per relation.
    pub fn show(&self, ring: &Ring) -> String {
        if self.relations.is_empty() {
            return "[]".into();
        }
        let rows: Vec<String> = (0..self.ngens)
            .map(|i| {
                let row: Vec<String> = self.relations.iter().map(|r| ring.show(&r[i])).collect();
                format!("[{}]", row.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }
}

/// `{r ∈ S : r·M = 0}`, from one syzygy computation on the stacked vector
/// `(e_1; ..; e_n)` against the block-diagonal relations.
pub fn annihilator<C: Field>(m: &FpModule<C>) -> Ideal<C> {
    let n = m.ngens;
    let nv = m.nvars;
    if n == 0 {
        return Ideal::unit(nv);
    }
    let rank = n * n;
    let mut gens = Vec::new();
    let mut stacked = vec![Poly::zero(nv); rank];
    for i in 0..n {
        stacked[i * n + i] = Poly::one(nv);
    }
    gens.push(stacked);
    for block in 0..n {
        for rel in &m.relations {
            let mut v = vec![Poly::zero(nv); rank];
            for (k, p) in rel.iter().enumerate() {
                v[block * n + k] = p.clone();
            }
            gens.push(v);
        }
    }
    let gb = ModuleGb::new(nv, rank, &gens, MonoOrder::GrevLex, true);
    let ann: Vec<Poly<C>> = gb.syzygies().into_iter().map(|s| s[0].clone()).filter(|p| !p.is_zero()).collect();
    Ideal::new(nv, ann)
}

/// A quotient of a submodule of `S^rank` by a smaller submodule, with
/// pruned generators and coordinates for members.
#[derive(Clone, Debug)]
struct Quotient<C> {
    generators: Vec<Vec<Poly<C>>>,
    module: FpModule<C>,
    /// Tracked basis of `generators ++ sub`.
    lifter: ModuleGb<C>,
    /// Basis of `sub` alone.
    sub_gb: ModuleGb<C>,
}

impl<C: Field> Quotient<C> {
    fn new(nvars: usize, rank: usize, candidates: Vec<Vec<Poly<C>>>, sub: Vec<Vec<Poly<C>>>) -> Self {
        let span = |kept: &[Vec<Poly<C>>], skip: Option<usize>| {
            let gens: Vec<Vec<Poly<C>>> = sub
                .iter()
                .cloned()
                .chain(kept.iter().enumerate().filter(|(i, _)| Some(*i) != skip).map(|(_, g)| g.clone()))
                .collect();
            ModuleGb::new(nvars, rank, &gens, MonoOrder::GrevLex, false)
        };
        let mut kept: Vec<Vec<Poly<C>>> = Vec::new();
        for c in candidates {
            if c.iter().all(Poly::is_zero) {
                continue;
            }
            if !span(&kept, None).contains(&c) {
                kept.push(c);
            }
        }
        let mut i = kept.len();
        while i > 1 {
            i -= 1;
            if span(&kept, Some(i)).contains(&kept[i]) {
                kept.remove(i);
            }
        }
        if kept.len() == 1 && span(&[], None).contains(&kept[0]) {
            kept.clear();
        }
        let m = kept.len();
        let all: Vec<Vec<Poly<C>>> = kept.iter().cloned().chain(sub.iter().cloned()).collect();
        let lifter = ModuleGb::new(nvars, rank, &all, MonoOrder::GrevLex, true);
        let mut relations: Vec<Vec<Poly<C>>> = Vec::new();
        for s in lifter.syzygies() {
            let r: Vec<Poly<C>> = s[..m].to_vec();
            if r.iter().any(|p| !p.is_zero()) && !relations.contains(&r) {
                relations.push(r);
            }
        }
        let sub_gb = ModuleGb::new(nvars, rank, &sub, MonoOrder::GrevLex, false);
        Quotient {
            generators: kept,
            module: FpModule { nvars, ngens: m, relations },
            lifter,
            sub_gb,
        }
    }

    fn coordinates(&self, v: &[Poly<C>]) -> Option<Vec<Poly<C>>> {
        self.lifter.lift(v).map(|c| c[..self.generators.len()].to_vec())
    }

    fn in_sub(&self, v: &[Poly<C>]) -> bool {
        self.sub_gb.contains(v)
    }
}

/// Generators of the cycle module `Z⁰` (as syzygies) and of the two
/// homotopy pieces `(A'h, hA)` and `(hB, B'h)`.
struct HomData<C> {
    rows: usize,
    cols: usize,
    rank: usize,
    cycles: Vec<Vec<Poly<C>>>,
    trivial_on_cokernel: Vec<Vec<Poly<C>>>,
    other_homotopies: Vec<Vec<Poly<C>>>,
}

fn unit_matrix<C: Field>(nvars: usize, rows: usize, cols: usize, i: usize, j: usize) -> Matrix<C> {
    let mut m = Matrix::zero(nvars, rows, cols);
    m.set(i, j, Poly::one(nvars));
    m
}

fn hom_data<C: Field>(m1: &MatrixFactorization<C>, m2: &MatrixFactorization<C>) -> Result<HomData<C>> {
    if m1.f != m2.f {
        return Err(MfError::DifferentPotential);
    }
    if m1.nvars() != m2.nvars() {
        return Err(MfError::SizeMismatch("different rings".into()));
    }
    for m in [m1, m2] {
        if !m.check_mf() {
            return Err(MfError::NotFactorization);
        }
    }
    let nv = m1.nvars();
    let (cols, rows) = (m1.rank(), m2.rank());
    let k = rows * cols;
    let rank = 2 * k;
    // images of the coordinate morphisms under the cycle condition map
    let mut images = Vec::with_capacity(rank);
    for half in 0..2 {
        for i in 0..rows {
            for j in 0..cols {
                let e = unit_matrix(nv, rows, cols, i, j);
                let zero = Matrix::zero(nv, rows, cols);
                let (a0, a1) = if half == 0 { (e, zero) } else { (zero, e) };
                let c0 = a0.mul(&m1.a).sub(&m2.a.mul(&a1));
                let c1 = a1.mul(&m1.b).sub(&m2.b.mul(&a0));
                images.push(c0.entries().iter().chain(c1.entries()).cloned().collect::<Vec<_>>());
            }
        }
    }
    let cycles = if rank == 0 {
        Vec::new()
    } else {
        ModuleGb::new(nv, rank, &images, MonoOrder::GrevLex, true).syzygies()
    };
    let mut trivial_on_cokernel = Vec::new();
    let mut other_homotopies = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            let h = unit_matrix(nv, rows, cols, i, j);
            // h0 = h: (A'h, hA); h1 = h: (hB, B'h)
            let first = MfMorphism { alpha0: m2.a.mul(&h), alpha1: h.mul(&m1.a) };
            let second = MfMorphism { alpha0: h.mul(&m1.b), alpha1: m2.b.mul(&h) };
            trivial_on_cokernel.push(first.to_coords());
            other_homotopies.push(second.to_coords());
        }
    }
    Ok(HomData { rows, cols, rank, cycles, trivial_on_cokernel, other_homotopies })
}

/// `Hom(M, N)` or its stable quotient, as a presented `S`-module together
/// with the morphisms chosen as generators.
#[derive(Clone, Debug)]
pub struct HomModule<C> {
    pub source: MatrixFactorization<C>,
    pub target: MatrixFactorization<C>,
    pub generators: Vec<MfMorphism<C>>,
    pub module: FpModule<C>,
    quotient: Quotient<C>,
}

impl<C: Field> HomModule<C> {
    fn build(
        m1: &MatrixFactorization<C>,
        m2: &MatrixFactorization<C>,
        data: &HomData<C>,
        sub: Vec<Vec<Poly<C>>>,
    ) -> Self {
        let nv = m1.nvars();
        let mut candidates = Vec::new();
        if m1 == m2 {
            candidates.push(m1.identity().to_coords());
        }
        candidates.extend(data.cycles.iter().cloned());
        let quotient = Quotient::new(nv, data.rank, candidates, sub);
        let generators = quotient
            .generators
            .iter()
            .map(|g| MfMorphism::from_coords(nv, data.rows, data.cols, g))
            .collect();
        HomModule { source: m1.clone(), target: m2.clone(), generators, module: quotient.module.clone(), quotient }
    }

    /// Coordinates of a morphism in terms of the generators, if it is a
    /// cycle. Coordinates are defined up to the module relations.
    pub fn coordinates(&self, a: &MfMorphism<C>) -> Option<Vec<Poly<C>>> {
        self.quotient.coordinates(&a.to_coords())
    }

    /// Whether `a` lies in the submodule that is divided out.
    pub fn is_trivial(&self, a: &MfMorphism<C>) -> bool {
        self.quotient.in_sub(&a.to_coords())
    }

    pub fn combination(&self, coords: &[Poly<C>]) -> MfMorphism<C> {
        let (r, c) = (self.target.rank(), self.source.rank());
        let mut acc = MfMorphism::zero(self.source.nvars(), r, c);
        for (g, p) in self.generators.iter().zip(coords) {
            acc = acc.add(&g.scale(p));
        }
        acc
    }
}

/// `Hom_R(coker A, coker A')`: cycles modulo the morphisms `(A'h, hA)`,
/// which induce zero on cokernels.
pub fn hom_space<C: Field>(m1: &MatrixFactorization<C>, m2: &MatrixFactorization<C>) -> Result<HomModule<C>> {
    let data = hom_data(m1, m2)?;
    let sub = data.trivial_on_cokernel.clone();
    Ok(HomModule::build(m1, m2, &data, sub))
}

/// Generators of the null-homotopic morphisms `M → N`.
#[derive(Clone, Debug)]
pub struct HomotopySubmodule<C> {
    pub generators: Vec<MfMorphism<C>>,
    gb: ModuleGb<C>,
}

impl<C: Field> HomotopySubmodule<C> {
    pub fn contains(&self, a: &MfMorphism<C>) -> bool {
        self.gb.contains(&a.to_coords())
    }
}

pub fn homotopy_submodule<C: Field>(
    m1: &MatrixFactorization<C>,
    m2: &MatrixFactorization<C>,
) -> Result<HomotopySubmodule<C>> {
    let data = hom_data(m1, m2)?;
    let nv = m1.nvars();
    let vecs: Vec<Vec<Poly<C>>> =
        data.trivial_on_cokernel.iter().chain(&data.other_homotopies).cloned().collect();
    let gb = ModuleGb::new(nv, data.rank, &vecs, MonoOrder::GrevLex, false);
    let generators = vecs.iter().map(|v| MfMorphism::from_coords(nv, data.rows, data.cols, v)).collect();
    Ok(HomotopySubmodule { generators, gb })
}

/// `Z⁰ / B⁰`, homotopy classes of morphisms.
pub fn stable_hom<C: Field>(m1: &MatrixFactorization<C>, m2: &MatrixFactorization<C>) -> Result<HomModule<C>> {
    let data = hom_data(m1, m2)?;
    let sub = data.trivial_on_cokernel.iter().chain(&data.other_homotopies).cloned().collect();
    Ok(HomModule::build(m1, m2, &data, sub))
}

/// Ring structure of the stable endomorphisms.
#[derive(Clone, Debug)]
pub struct StableEndPresentation<C> {
    pub hom: HomModule<C>,
    /// `product[i][j]`: coordinates of `w_i ∘ w_j`.
    pub product: Vec<Vec<Vec<Poly<C>>>>,
    /// Pairs `(i, j)` with `w_i w_j − w_j w_i` not null-homotopic.
    pub noncommuting: Vec<(usize, usize)>,
    /// Triples failing associativity up to homotopy.
    pub nonassociative: Vec<(usize, usize, usize)>,
    /// `S[w_1..] / J` with `w_0 = id` sent to `1`, when commutative.
    pub ring: Option<QuotientRing<C>>,
    /// Names of the non-identity generators in `ring`.
    pub generator_names: Vec<String>,
}

impl<C: Field> StableEndPresentation<C> {
    pub fn is_zero_ring(&self) -> bool {
        self.hom.generators.is_empty()
    }

    pub fn is_commutative(&self) -> bool {
        self.noncommuting.is_empty()
    }

    /// The presentation with the named ring variables eliminated, i.e. the
    /// subring generated by the remaining variables.
    pub fn eliminated(&self, names: &[&str]) -> Option<Result<QuotientRing<C>>> {
        let q = self.ring.as_ref()?;
        let mut drop = Vec::new();
        for n in names {
            match q.ring.index_of(n) {
                Some(i) => drop.push(i),
                None => return Some(Err(MfError::SizeMismatch(format!("no variable `{n}`")))),
            }
        }
        let keep: Vec<usize> = (0..q.ring.nvars()).filter(|i| !drop.contains(i)).collect();
        let ideal = q.ideal.eliminate(&drop);
        Some(ideal.restrict(&keep).map_err(MfError::from).map(|ideal| QuotientRing {
            ring: Ring { vars: keep.iter().map(|&i| q.ring.vars[i].clone()).collect() },
            ideal,
        }))
    }
}

pub fn stable_end_ring<C: Field>(m: &MatrixFactorization<C>) -> Result<StableEndPresentation<C>> {
    let hom = stable_hom(m, m)?;
    let g = &hom.generators;
    let nv = m.nvars();
    let k = g.len();
    let mut product = vec![vec![Vec::new(); k]; k];
    for i in 0..k {
        for j in 0..k {
            let c = g[i].compose(&g[j]);
            product[i][j] = hom.coordinates(&c).expect("composite of cycles is a cycle");
        }
    }
    let mut noncommuting = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let d = g[i].compose(&g[j]).sub(&g[j].compose(&g[i]));
            if !hom.is_trivial(&d) {
                noncommuting.push((i, j));
            }
        }
    }
    let mut nonassociative = Vec::new();
    for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                let left = hom.combination(&product[i][j]).compose(&g[l]);
                let right = g[i].compose(&hom.combination(&product[j][l]));
                if !hom.is_trivial(&left.sub(&right)) {
                    nonassociative.push((i, j, l));
                }
            }
        }
    }
    let identity_first = k > 0 && g[0] == m.identity();
    let extra = k.saturating_sub(1);
    let generator_names: Vec<String> = match extra {
        0 => Vec::new(),
        1 => vec!["w".to_string()],
        _ => (1..=extra).map(|i| format!("w{i}")).collect(),
    };
    let ring = if !noncommuting.is_empty() {
        None
    } else if k == 0 {
        Some(QuotientRing::new(m.ring.clone(), vec![Poly::one(nv)]))
    } else if !identity_first {
        None
    } else {
        let n = nv + extra;
        let mut vars = m.ring.vars.clone();
        vars.extend(generator_names.iter().cloned());
        let ring = Ring { vars };
        let w = |i: usize| -> Poly<C> { if i == 0 { Poly::one(n) } else { Poly::var(n, nv + i - 1) } };
        let lin = |coords: &[Poly<C>]| -> Poly<C> {
            coords.iter().enumerate().fold(Poly::zero(n), |acc, (i, c)| acc.add(&c.extend(extra).mul(&w(i))))
        };
        let mut gens = vec![m.f.extend(extra)];
        for r in &hom.module.relations {
            gens.push(lin(r));
        }
        for i in 1..k {
            for j in i..k {
                gens.push(w(i).mul(&w(j)).sub(&lin(&product[i][j])));
            }
        }
        gens.retain(|p| !p.is_zero());
        Some(QuotientRing::new(ring, gens))
    };
    Ok(StableEndPresentation { hom, product, noncommuting, nonassociative, ring, generator_names })
}

/// Whether the annihilator of the stable endomorphisms cuts out the
/// singular locus: `√ann = √J(f)`.
pub fn full_support_check<C: Field>(m: &MatrixFactorization<C>) -> Result<bool> {
    let end = stable_hom(m, m)?;
    let ann = annihilator(&end.module);
    let jac = polyalg::jacobian_ideal(&m.f)?;
    Ok(ann.equal_up_to_radical(&jac)?)
}

/// Outcome of certifying `Hom(X, N) ≅ Hom(Y, N)` (or the covariant
/// version) from a pair of mutually inverse homotopy equivalences.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TransportCheck {
    pub equivalence_valid: bool,
    pub maps_cycles: bool,
    pub maps_homotopies: bool,
    pub round_trips: bool,
}

impl TransportCheck {
    pub fn passes(&self) -> bool {
        self.equivalence_valid && self.maps_cycles && self.maps_homotopies && self.round_trips
    }
}

/// Certifies `\underline{Hom}(X, N) ≅ \underline{Hom}(Y, N)` given
/// `u: X → Y`, `v: Y → X` with `vu ~ id`, `uv ~ id`, via `α ↦ α∘v`,
/// `β ↦ β∘u`.
pub fn certify_source_change<C: Field>(
    x: &MatrixFactorization<C>,
    y: &MatrixFactorization<C>,
    n: &MatrixFactorization<C>,
    u: &MfMorphism<C>,
    v: &MfMorphism<C>,
) -> Result<TransportCheck> {
    let hx = homotopy_submodule(x, x)?;
    let hy = homotopy_submodule(y, y)?;
    let equivalence_valid = u.is_morphism(x, y)
        && v.is_morphism(y, x)
        && hx.contains(&v.compose(u).sub(&x.identity()))
        && hy.contains(&u.compose(v).sub(&y.identity()));
    let sx = stable_hom(x, n)?;
    let sy = stable_hom(y, n)?;
    let bx = homotopy_submodule(x, n)?;
    let by = homotopy_submodule(y, n)?;
    let maps_cycles = sx.generators.iter().all(|a| a.compose(v).is_morphism(y, n))
        && sy.generators.iter().all(|b| b.compose(u).is_morphism(x, n));
    let maps_homotopies = bx.generators.iter().all(|a| by.contains(&a.compose(v)))
        && by.generators.iter().all(|b| bx.contains(&b.compose(u)));
    let round_trips = sx.generators.iter().all(|a| bx.contains(&a.compose(v).compose(u).sub(a)))
        && sy.generators.iter().all(|b| by.contains(&b.compose(u).compose(v).sub(b)));
    Ok(TransportCheck { equivalence_valid, maps_cycles, maps_homotopies, round_trips })
}

/// Covariant version: `\underline{Hom}(N, X) ≅ \underline{Hom}(N, Y)` via
/// `α ↦ u∘α`, `β ↦ v∘β`.
pub fn certify_target_change<C: Field>(
    n: &MatrixFactorization<C>,
    x: &MatrixFactorization<C>,
    y: &MatrixFactorization<C>,
    u: &MfMorphism<C>,
    v: &MfMorphism<C>,
) -> Result<TransportCheck> {
    let hx = homotopy_submodule(x, x)?;
    let hy = homotopy_submodule(y, y)?;
    let equivalence_valid = u.is_morphism(x, y)
        && v.is_morphism(y, x)
        && hx.contains(&v.compose(u).sub(&x.identity()))
        && hy.contains(&u.compose(v).sub(&y.identity()));
    let sx = stable_hom(n, x)?;
    let sy = stable_hom(n, y)?;
    let bx = homotopy_submodule(n, x)?;
    let by = homotopy_submodule(n, y)?;
    let maps_cycles = sx.generators.iter().all(|a| u.compose(a).is_morphism(n, y))
        && sy.generators.iter().all(|b| v.compose(b).is_morphism(n, x));
    let maps_homotopies = bx.generators.iter().all(|a| by.contains(&u.compose(a)))
        && by.generators.iter().all(|b| bx.contains(&v.compose(b)));
    let round_trips = sx.generators.iter().all(|a| bx.contains(&v.compose(&u.compose(a)).sub(a)))
        && sy.generators.iter().all(|b| by.contains(&u.compose(&v.compose(b)).sub(b)));
    Ok(TransportCheck { equivalence_valid, maps_cycles, maps_homotopies, round_trips })
}

/// Certifies `\underline{Hom}(M, N) ≅ \underline{Hom}(ΣM, ΣN)` under
/// `(α0, α1) ↦ (α1, α0)`.
pub fn certify_shift<C: Field>(m: &MatrixFactorization<C>, n: &MatrixFactorization<C>) -> Result<TransportCheck> {
    let (sm, sn) = (m.shift(), n.shift());
    let swap = |a: &MfMorphism<C>| MfMorphism { alpha0: a.alpha1.clone(), alpha1: a.alpha0.clone() };
    let s = stable_hom(m, n)?;
    let t = stable_hom(&sm, &sn)?;
    let bs = homotopy_submodule(m, n)?;
    let bt = homotopy_submodule(&sm, &sn)?;
    let maps_cycles = s.generators.iter().all(|a| swap(a).is_morphism(&sm, &sn))
        && t.generators.iter().all(|b| swap(b).is_morphism(m, n));
    let maps_homotopies = bs.generators.iter().all(|a| bt.contains(&swap(a)))
        && bt.generators.iter().all(|b| bs.contains(&swap(b)));
    Ok(TransportCheck { equivalence_valid: true, maps_cycles, maps_homotopies, round_trips: true })
}

/// Inclusion `M → M ⊕ T` and projection `M ⊕ T → M` for a summand `T`
/// appended after `M`.
pub fn summand_maps<C: Field>(m: &MatrixFactorization<C>, t_rank: usize) -> (MfMorphism<C>, MfMorphism<C>) {
    let nv = m.nvars();
    let n = m.rank();
    let mut inc = Matrix::zero(nv, n + t_rank, n);
    let mut proj = Matrix::zero(nv, n, n + t_rank);
    for i in 0..n {
        inc.set(i, i, Poly::one(nv));
        proj.set(i, i, Poly::one(nv));
    }
    (
        MfMorphism { alpha0: inc.clone(), alpha1: inc },
        MfMorphism { alpha0: proj.clone(), alpha1: proj },
    )
}

impl<C: Field> fmt::Display for FpModule<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S^{} / ({} relations)", self.ngens, self.relations.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::Q;

    fn a_inf() -> MatrixFactorization<Q> {
        MatrixFactorization::parse("mf over QQ[x,y] f = x^2\nA = [[x]]\nB = [[x]]\n").unwrap()
    }

    fn d_inf() -> MatrixFactorization<Q> {
        MatrixFactorization::parse(
            "mf over QQ[x,y,z] f = x^2*y + z^2\nA = [[z, x*y], [-x, z]]\nB = [[z, -x*y], [x, z]]\n",
        )
        .unwrap()
    }

    #[test]
    fn factorization_checks() {
        assert!(a_inf().check_mf());
        assert!(d_inf().check_mf());
        let xy = MatrixFactorization::<Q>::parse("mf over QQ[x,y] f = x*y\nA = [[x]]\nB = [[y]]\n").unwrap();
        assert!(xy.check_mf());
        let bad = MatrixFactorization::<Q>::parse("mf over QQ[x,y] f = x*y\nA = [[x]]\nB = [[x]]\n").unwrap();
        assert!(!bad.check_mf());
        let r = MatrixFactorization::<Q>::parse("mf over QQ[x] f = x\nA = [[x, 1]]\nB = [[1]]\n");
        assert!(matches!(r, Err(MfError::SizeMismatch(_))));
    }

    #[test]
    fn a_inf_stable_end() {
        let m = a_inf();
        let h = hom_space(&m, &m).unwrap();
        assert_eq!(h.generators, vec![m.identity()]);
        let s = stable_hom(&m, &m).unwrap();
        assert_eq!(s.module.ngens, 1);
        let ann = annihilator(&s.module);
        let r = Ring::new(&["x", "y"]);
        assert!(ann.same_ideal(&Ideal::new(2, vec![r.parse("x").unwrap()])));
        assert!(full_support_check(&m).unwrap());
    }

    #[test]
    fn trivial_factorization_is_zero() {
        let m = a_inf();
        let t = MatrixFactorization::trivial(m.ring.clone(), m.f.clone());
        let s = stable_end_ring(&t).unwrap();
        assert!(s.is_zero_ring());
        assert!(s.ring.unwrap().ideal.is_unit());
        assert!(annihilator(&s.hom.module).is_unit());
        assert!(!full_support_check(&t).unwrap());
        assert!(stable_hom(&m, &t).unwrap().module.is_zero_module());
        assert!(hom_space(&m, &t).unwrap().module.is_zero_module());
        let h = homotopy_submodule(&t, &t).unwrap();
        assert!(h.contains(&t.identity()));
    }

    #[test]
    fn d_inf_endomorphism_squares_to_minus_y() {
        let m = d_inf();
        let r = &m.ring;
        let w = MfMorphism {
            alpha0: Matrix::parse("[[0, -y], [1, 0]]", r).unwrap(),
            alpha1: Matrix::parse("[[0, -y], [1, 0]]", r).unwrap(),
        };
        assert!(w.is_morphism(&m, &m));
        let y = r.parse("y").unwrap();
        assert_eq!(w.compose(&w), m.identity().scale(&y).scale(&Poly::from_i64(3, -1)));
    }

    #[test]
    fn annihilator_of_cyclic_module() {
        let r = Ring::new(&["x", "y"]);
        let m = FpModule { nvars: 2, ngens: 1, relations: vec![vec![r.parse::<Q>("x^2").unwrap()], vec![r.parse("x*y").unwrap()]] };
        let ann = annihilator(&m);
        assert!(ann.same_ideal(&Ideal::new(2, vec![r.parse("x^2").unwrap(), r.parse("x*y").unwrap()])));
    }

    #[test]
    fn d_inf_stable_end_ring() {
        let m = d_inf();
        let e = stable_end_ring(&m).unwrap();
        assert_eq!(e.hom.generators.len(), 2);
        assert_eq!(e.hom.generators[0], m.identity());
        assert!(e.is_commutative());
        assert!(e.nonassociative.is_empty());
        let ann = annihilator(&e.hom.module);
        let r = &m.ring;
        assert!(ann.same_ideal(&Ideal::new(3, vec![r.parse("x").unwrap(), r.parse("z").unwrap()])));
        let small = e.eliminated(&["x", "z"]).unwrap().unwrap();
        assert_eq!(small.ring.vars, vec!["y", "w"]);
        let expected = Ideal::new(2, vec![small.ring.parse("w^2 + y").unwrap()]);
        assert!(small.ideal.same_ideal(&expected));
        assert!(full_support_check(&m).unwrap());
    }

    #[test]
    fn parse_errors_are_located() {
        let e = MatrixFactorization::<Q>::parse("mf over QQ[x] f = x^2\nA = [[x, q]]\nB = [[x]]\n").unwrap_err();
        match e {
            MfError::Parse(p) => assert_eq!((p.line, p.col), (2, 10)),
            other => panic!("{other:?}"),
        }
    }
}
