//! Tensor structure on a [`SupportModel`]: thick ⊗-ideals, radicals,
//! primes and the Balmer spectrum, computed by brute force.
//!
//! A product `M ⊗ N` is a multiset of model objects (its decomposition into
//! indecomposable summands). Membership of a product in a thick subcategory
//! means that every summand is a member.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::bitset::Bits;
use crate::lattice;
use crate::spectral_space::{SpaceError, SpecSpace};
use crate::support_model::{ModelError, SupportModel};
use crate::text::{Line, ParseError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TensorError {
    #[error("product {0} ⊗ {1} is not symmetric")]
    NotSymmetric(String, String),
    #[error("{0} ⊗ unit is not {0}")]
    UnitLaw(String),
    #[error("{0} ⊗ 0 is not 0")]
    ZeroLaw(String),
    #[error("no object has support σ({0}) ∩ σ({1}) for the default product")]
    NoDefaultProduct(String, String),
    #[error("missing `tensor unit <id>` line")]
    MissingUnit,
    #[error("prime ideals are proper")]
    NotProper,
    #[error("{0:?} is not a thick tensor ideal")]
    NotIdeal(Bits),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T> = std::result::Result<T, TensorError>;

/// Symmetric product table with a unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorTable {
    unit: usize,
    /// `prod[m][n]` is the sorted multiset `M ⊗ N`.
    prod: Vec<Vec<Vec<usize>>>,
}

impl TensorTable {
    /// Validates symmetry, the unit law and `M ⊗ 0 = 0`.
    pub fn new(m: &SupportModel, unit: usize, mut prod: Vec<Vec<Vec<usize>>>) -> Result<TensorTable> {
        let n = m.len();
        assert_eq!(prod.len(), n);
        for row in &mut prod {
            assert_eq!(row.len(), n);
            for cell in row.iter_mut() {
                cell.sort_unstable();
            }
        }
        let zero = m.zero();
        for a in 0..n {
            for b in 0..n {
                if prod[a][b] != prod[b][a] {
                    return Err(TensorError::NotSymmetric(m.id(a).into(), m.id(b).into()));
                }
            }
            if prod[a][unit] != [a] {
                return Err(TensorError::UnitLaw(m.id(a).into()));
            }
            if prod[a][zero] != [zero] {
                return Err(TensorError::ZeroLaw(m.id(a).into()));
            }
        }
        Ok(TensorTable { unit, prod })
    }

    /// `M_Z ⊗ M_W = M_{Z∩W}` on a canonical model, unit `M_X`.
    pub fn intersection(m: &SupportModel) -> Result<TensorTable> {
        Self::from_entries(m, unit_of_full_support(m), &[])
    }

    /// Table with the given entries; unlisted pairs get the object whose
    /// support is `σ(M) ∩ σ(N)` (smallest index), or `0` for the zero object.
    pub fn from_entries(m: &SupportModel, unit: usize, entries: &[(usize, usize, Vec<usize>)]) -> Result<TensorTable> {
        let n = m.len();
        let mut prod: Vec<Vec<Option<Vec<usize>>>> = vec![vec![None; n]; n];
        for (a, b, c) in entries {
            prod[*a][*b] = Some(c.clone());
            prod[*b][*a] = Some(c.clone());
        }
        let zero = m.zero();
        let mut out = vec![vec![Vec::new(); n]; n];
        for a in 0..n {
            for b in 0..n {
                out[a][b] = match prod[a][b].take() {
                    Some(c) => c,
                    None if a == zero || b == zero => vec![zero],
                    None if a == unit => vec![b],
                    None if b == unit => vec![a],
                    None => {
                        let s = m.sigma(a) & m.sigma(b);
                        let c = (0..n).find(|&c| m.sigma(c) == s).ok_or_else(|| {
                            TensorError::NoDefaultProduct(m.id(a).into(), m.id(b).into())
                        })?;
                        vec![c]
                    }
                };
            }
        }
        Self::new(m, unit, out)
    }

    /// Parses the `tensor unit <id>` / `prod <a> <b> -> { <ids> }` lines
    /// collected by [`crate::support_model::parse_model`].
    pub fn parse(m: &SupportModel, lines: &[(usize, String)]) -> Result<TensorTable> {
        let mut unit = None;
        let mut entries = Vec::new();
        for (number, text) in lines {
            let line = Line { number: *number, indent: 0, text };
            let words = line.words();
            let lookup = |k: usize| -> Result<usize> {
                let (off, id) = words[k];
                m.index_of(id)
                    .map_err(|_| line.error(off, format!("dangling reference to object `{id}`")).into())
            };
            match words[0].1 {
                "tensor" if words.len() == 3 && words[1].1 == "unit" => unit = Some(lookup(2)?),
                "prod" if words.len() >= 4 && words[3].1 == "->" => {
                    let (a, b) = (lookup(1)?, lookup(2)?);
                    let (off, inner, _) = crate::text::braced(text)
                        .ok_or_else(|| line.error(words[3].0, "expected `{ <ids> }`"))?;
                    let mut c = Vec::new();
                    for id in inner.split_whitespace() {
                        c.push(m.index_of(id).map_err(|_| {
                            line.error(off + inner.find(id).unwrap_or(0), format!("dangling reference to object `{id}`"))
                        })?);
                    }
                    entries.push((a, b, c));
                }
                _ => return Err(line.error(0, format!("unrecognized tensor line `{text}`")).into()),
            }
        }
        Self::from_entries(m, unit.ok_or(TensorError::MissingUnit)?, &entries)
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn product(&self, a: usize, b: usize) -> &[usize] {
        &self.prod[a][b]
    }

    /// Distinct summands of `M ⊗ N`.
    pub fn product_set(&self, a: usize, b: usize) -> Bits {
        self.prod[a][b].iter().copied().collect()
    }

    /// Summand sets of `M`, `M⊗M`, `M⊗M⊗M`, ... until they repeat.
    pub fn power_summands(&self, m: usize) -> Vec<Bits> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        let mut cur = Bits::singleton(m);
        while seen.insert(cur) {
            out.push(cur);
            cur = cur.iter().fold(Bits::EMPTY, |acc, a| acc | self.product_set(a, m));
        }
        out
    }

    pub fn to_text(&self, m: &SupportModel) -> String {
        let mut s = format!("tensor unit {}\n", m.id(self.unit));
        for a in 0..m.len() {
            for b in a..m.len() {
                let ids: Vec<&str> = self.prod[a][b].iter().map(|&c| m.id(c)).collect();
                s.push_str(&format!("prod {} {} -> {{ {} }}\n", m.id(a), m.id(b), ids.join(" ")));
            }
        }
        s
    }
}

fn unit_of_full_support(m: &SupportModel) -> usize {
    let full = m.space().all();
    (0..m.len()).find(|&a| m.sigma(a) == full).unwrap_or(m.zero())
}

/// A support model with a product table.
#[derive(Debug, Clone)]
pub struct TensorModel {
    pub model: SupportModel,
    pub table: TensorTable,
}

#[derive(Debug, Clone)]
pub struct BalmerSpace {
    /// Prime thick ⊗-ideals, ordered by mask.
    pub primes: Vec<Bits>,
    /// `Spp(M)` as a subset of prime indices.
    pub spp: Vec<Bits>,
    /// Closed sets generated by the closed basis `{Spp(M)}`.
    pub closed_sets: Vec<Bits>,
    /// The spectrum as a poset, when the topology is T0.
    pub space: Option<SpecSpace>,
    /// `(Spc, Spp)` re-read as support data on the model.
    pub support_axioms: bool,
    /// Condition (1′) for `Spp`.
    pub faithful: bool,
    /// `Spp(M⊗N) = Spp(M) ∩ Spp(N)` for all pairs.
    pub tensorial: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorialReport {
    /// First pair with `σ(M⊗N) ≠ σ(M) ∩ σ(N)`.
    pub violation: Option<(usize, usize)>,
}

impl TensorialReport {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitGenerationReport {
    /// (i) every thick subcategory is a ⊗-ideal.
    pub thick_are_ideals: bool,
    /// A thick subcategory that is not a ⊗-ideal, with an absorbing failure
    /// `M ∈ X`, `N`, such that `M ⊗ N ⊄ X`.
    pub non_ideal_witness: Option<(Bits, usize, usize)>,
    /// (ii) `thick(1)` is everything.
    pub unit_generates: bool,
    pub outside_unit: Bits,
    /// (iii) `f_σ`, `g_σ` biject `Th` and `Spcl`.
    pub classifying: bool,
    /// Hypotheses under which (ii) is expected to force (i) and (iii):
    /// tensorial support, radical ideals classified by `σ`, every thick
    /// ⊗-ideal radical.
    pub tensorial: bool,
    pub radical_classifying: bool,
    pub ideals_radical: bool,
    /// `(i) ⟹ (ii)` and, under the hypotheses, `(ii) ⟹ (i) ∧ (iii)`.
    pub implications_hold: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadicalClassification {
    pub radical_ideals: Vec<Bits>,
    /// Specialization-closed subsets of the Balmer space (all Thomason).
    pub thomason: Vec<Bits>,
    /// A radical ideal or a subset where the two maps are not inverse.
    pub counterexample: Option<String>,
}

impl RadicalClassification {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

impl TensorModel {
    pub fn new(model: SupportModel, table: TensorTable) -> TensorModel {
        TensorModel { model, table }
    }

    /// Canonical model of `space` with the intersection product.
    pub fn canonical(space: &SpecSpace) -> TensorModel {
        let model = SupportModel::canonical(space);
        let table = TensorTable::intersection(&model).expect("canonical model realizes every intersection");
        TensorModel { model, table }
    }

    fn len(&self) -> usize {
        self.model.len()
    }

    fn absorbs(&self, x: Bits) -> Option<(usize, usize)> {
        for a in x.iter() {
            for b in 0..self.len() {
                if !self.table.product_set(a, b).is_subset(x) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Smallest thick ⊗-ideal containing `s`.
    pub fn tensor_ideal_closure(&self, s: Bits) -> Bits {
        let mut x = self.model.thick(s);
        loop {
            let mut grown = x;
            for a in x.iter() {
                for b in 0..self.len() {
                    grown = grown | self.table.product_set(a, b);
                }
            }
            let next = self.model.thick(grown);
            if next == x {
                return x;
            }
            x = next;
        }
    }

    pub fn is_tensor_ideal(&self, x: Bits) -> bool {
        self.model.is_thick(x) && self.absorbs(x).is_none()
    }

    /// All thick ⊗-ideals in lectic order.
    pub fn tensor_ideals(&self) -> Vec<Bits> {
        lattice::all_closed_sets(self.len(), |s| self.tensor_ideal_closure(s))
    }

    /// `√I`: objects some tensor power of which lies in `I`.
    pub fn radical(&self, ideal: Bits) -> Bits {
        (0..self.len())
            .filter(|&m| self.table.power_summands(m).iter().any(|p| p.is_subset(ideal)))
            .collect()
    }

    pub fn is_radical(&self, ideal: Bits) -> bool {
        self.radical(ideal) == ideal
    }

    pub fn is_prime(&self, ideal: Bits) -> Result<bool> {
        if ideal == self.model.all() {
            return Err(TensorError::NotProper);
        }
        if !self.is_tensor_ideal(ideal) {
            return Err(TensorError::NotIdeal(ideal));
        }
        Ok(self.prime_witness(ideal).is_none())
    }

    /// A pair `M, N ∉ P` with `M ⊗ N ∈ P`.
    pub fn prime_witness(&self, ideal: Bits) -> Option<(usize, usize)> {
        let outside = self.model.all() - ideal;
        for a in outside.iter() {
            for b in outside.iter().filter(|&b| b >= a) {
                if self.table.product_set(a, b).is_subset(ideal) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn primes(&self) -> Vec<Bits> {
        let all = self.model.all();
        let mut v: Vec<Bits> = self
            .tensor_ideals()
            .into_iter()
            .filter(|&i| i != all && self.prime_witness(i).is_none())
            .collect();
        v.sort();
        v
    }

    pub fn balmer_spectrum(&self) -> BalmerSpace {
        let primes = self.primes();
        let n = primes.len();
        let spp: Vec<Bits> = (0..self.len())
            .map(|m| (0..n).filter(|&i| !primes[i].contains(m)).collect())
            .collect();
        let all = Bits::full(n);
        let mut closed: BTreeSet<Bits> = spp.iter().copied().chain([all]).collect();
        loop {
            let items: Vec<Bits> = closed.iter().copied().collect();
            let before = closed.len();
            for (i, &a) in items.iter().enumerate() {
                for &b in &items[i + 1..] {
                    closed.insert(a & b);
                }
            }
            if closed.len() == before {
                break;
            }
        }
        let closed_sets: Vec<Bits> = closed.into_iter().collect();
        let point_closures: Vec<Bits> = (0..n)
            .map(|i| closed_sets.iter().filter(|c| c.contains(i)).fold(all, |acc, &c| acc & c))
            .collect();
        let ids: Vec<String> = primes
            .iter()
            .map(|p| {
                let members: Vec<&str> = p.iter().map(|m| self.model.id(m)).collect();
                format!("P[{}]", members.join(","))
            })
            .collect();
        let space = SpecSpace::from_closures(format!("Spc {}", self.model.name()), &ids, point_closures).ok();
        let (support_axioms, faithful) = match &space {
            Some(s) => {
                let r = self.model.with_support("Spp", s.clone(), spp.clone()).check_support_axioms();
                (r.passes(), r.faithful)
            }
            None => (false, false),
        };
        let tensorial = (0..self.len()).all(|a| {
            (0..self.len()).all(|b| {
                let s = self.table.product(a, b).iter().fold(Bits::EMPTY, |acc, &c| acc | spp[c]);
                s == spp[a] & spp[b]
            })
        });
        BalmerSpace { primes, spp, closed_sets, space, support_axioms, faithful, tensorial }
    }

    pub fn check_tensorial(&self) -> TensorialReport {
        let m = &self.model;
        for a in 0..self.len() {
            for b in a..self.len() {
                if m.f_sigma(self.table.product_set(a, b)) != m.sigma(a) & m.sigma(b) {
                    return TensorialReport { violation: Some((a, b)) };
                }
            }
        }
        TensorialReport { violation: None }
    }

    /// Radical thick ⊗-ideals correspond to specialization-closed subsets
    /// of `space` under the model's `σ`.
    fn radical_ideals_classified_by_sigma(&self) -> bool {
        let m = &self.model;
        let radicals: Vec<Bits> = self.tensor_ideals().into_iter().filter(|&i| self.is_radical(i)).collect();
        let spcl = m.space().specialization_closed_sets();
        spcl.iter().all(|&w| {
            let g = m.g_sigma(w).expect("spcl");
            radicals.contains(&g) && m.f_sigma(g) == w
        }) && radicals.iter().all(|&r| m.g_sigma(m.f_sigma(r)).ok() == Some(r))
    }

    pub fn check_unit_generation(&self) -> UnitGenerationReport {
        let m = &self.model;
        let mut non_ideal_witness = None;
        for x in m.thick_subcategories() {
            if let Some((a, b)) = self.absorbs(x) {
                non_ideal_witness = Some((x, a, b));
                break;
            }
        }
        let thick_are_ideals = non_ideal_witness.is_none();
        let thick_unit = m.thick(Bits::singleton(self.table.unit));
        let unit_generates = thick_unit == m.all();
        let classifying = m.is_classifying().holds();
        let tensorial = self.check_tensorial().holds();
        let radical_classifying = self.radical_ideals_classified_by_sigma();
        let ideals_radical = self.tensor_ideals().into_iter().all(|i| self.is_radical(i));
        let hypotheses = tensorial && radical_classifying && ideals_radical;
        let implications_hold = (!thick_are_ideals || unit_generates)
            && (!(hypotheses && unit_generates) || (thick_are_ideals && classifying));
        UnitGenerationReport {
            thick_are_ideals,
            non_ideal_witness,
            unit_generates,
            outside_unit: m.all() - thick_unit,
            classifying,
            tensorial,
            radical_classifying,
            ideals_radical,
            implications_hold,
        }
    }

    /// Radical thick ⊗-ideals versus Thomason subsets of the Balmer space.
    pub fn classify_radical_ideals(&self) -> Result<RadicalClassification> {
        let spc = self.balmer_spectrum();
        let space = spc
            .space
            .as_ref()
            .ok_or(TensorError::Model(ModelError::Space(SpaceError::NotPartialOrder(
                "Balmer topology is not T0".into(),
            ))))?;
        let radical_ideals: Vec<Bits> =
            self.tensor_ideals().into_iter().filter(|&i| self.is_radical(i)).collect();
        let thomason = space.specialization_closed_sets();
        let f = |x: Bits| x.iter().fold(Bits::EMPTY, |acc, m| acc | spc.spp[m]);
        let g = |w: Bits| -> Bits { (0..self.len()).filter(|&m| spc.spp[m].is_subset(w)).collect() };
        let mut counterexample = None;
        for &r in &radical_ideals {
            if g(f(r)) != r {
                counterexample = Some(format!(
                    "radical ideal {} is not recovered from its support",
                    self.model.format_objects(r)
                ));
                break;
            }
        }
        if counterexample.is_none() {
            for &w in &thomason {
                let gw = g(w);
                if f(gw) != w || !radical_ideals.contains(&gw) {
                    counterexample = Some(format!(
                        "subset {} is not the support of a radical ideal",
                        space.format_subset(w)
                    ));
                    break;
                }
            }
        }
        if counterexample.is_none() && radical_ideals.len() != thomason.len() {
            counterexample = Some(format!(
                "{} radical ideals versus {} Thomason subsets",
                radical_ideals.len(),
                thomason.len()
            ));
        }
        Ok(RadicalClassification { radical_ideals, thomason, counterexample })
    }
}

/// The three-object model `0, U, N` with `σ(U) = σ(N) = {p}`, unit `U`,
/// `U ⊗ N = N ⊗ N = N`, and thick subcategories `{0}`, `{0,U}`, `{0,N}`,
/// everything. `thick(U)` is not a ⊗-ideal.
pub fn unit_not_generating_model() -> TensorModel {
    use crate::support_model::ModelSpec;
    let space = SpecSpace::antichain("point", &["p"]);
    let spec = ModelSpec {
        name: "unit-not-generating".into(),
        objects: vec![("U".into(), vec!["p".into()]), ("N".into(), vec!["p".into()])],
        rules: Some(vec![]),
        ..Default::default()
    };
    let model = SupportModel::new(space, spec).expect("valid model");
    let (u, n) = (model.index_of("U").unwrap(), model.index_of("N").unwrap());
    let table = TensorTable::from_entries(&model, u, &[(n, n, vec![n])]).expect("valid table");
    TensorModel { model, table }
}
