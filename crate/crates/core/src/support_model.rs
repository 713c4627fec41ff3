//! Finite models of triangulated categories equipped with support data.
//!
//! A [`SupportModel`] keeps only what the support-theoretic arguments use:
//! a set of objects (isomorphism classes up to shift, so the shift axiom is
//! vacuous), a closed support `σ(M)` for each object, declared direct sums
//! and triangles, and a thick-closure operator on sets of objects. From
//! that data this module computes the maps `f_σ`/`g_σ`, decides whether the
//! support data is classifying, builds the spectrum of irreducible principal
//! thick subcategories, and checks the reconstruction homeomorphism.

use std::collections::HashMap;
use std::sync::OnceLock;

use thiserror::Error;

use crate::bitset::{Bits, MAX_BITS};
use crate::lattice;
use crate::spectral_space::{self, SpaceError, SpecSpace};
use crate::text::{self, Line, ParseError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("duplicate object `{0}`")]
    DuplicateObject(String),
    #[error("no support given for object `{0}`")]
    MissingSupport(String),
    #[error("support of `{0}` is not closed")]
    SupportNotClosed(String),
    #[error("{0:?} is not specialization-closed")]
    NotSpecializationClosed(Bits),
    #[error("operation requires classifying support data: {0}")]
    NotClassifying(String),
    #[error("inconsistent model: {0}")]
    Inconsistent(String),
    #[error("object map is not a closure-compatible bijection: {0}")]
    NotCompatible(String),
    #[error("model has {0} objects; at most {MAX_BITS} are supported")]
    TooLarge(usize),
    #[error(transparent)]
    Space(#[from] SpaceError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T> = std::result::Result<T, ModelError>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ObjectId {
    pub id: String,
    pub index: usize,
}

/// Name of the distinguished zero object.
pub const ZERO: &str = "0";

/// How the thick closure of a set of objects is computed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThickClosure {
    /// `thick(S) = {N : σ(N) ⊆ ⋃_{M∈S} σ(M)}`.
    Canonical,
    /// Least superset closed under the rules `S ⊆ X ⟹ T ⊆ X`, under
    /// two-out-of-three for declared triangles, and under sums and summands
    /// for declared sums.
    Rules(Vec<(Bits, Bits)>),
    /// Intersection of the listed thick subcategories containing the input.
    /// The full object set is always implicitly listed.
    Family(Vec<Bits>),
}

#[derive(Debug, Clone)]
pub struct SupportModel {
    name: String,
    space: SpecSpace,
    objects: Vec<ObjectId>,
    sigma: Vec<Bits>,
    sums: Vec<(usize, usize, usize)>,
    triangles: Vec<(usize, usize, usize)>,
    closure: ThickClosure,
    zero: usize,
    lookup: HashMap<String, usize>,
    classifying: OnceLock<ClassifyingReport>,
}

/// Per-axiom outcome of [`SupportModel::check_support_axioms`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub supports_closed: bool,
    pub zero_has_empty_support: bool,
    /// Objects are shift classes, so `σ(ΣM) = σ(M)` holds by construction.
    pub shift_vacuous: bool,
    pub sum_violations: Vec<(usize, usize, usize)>,
    pub triangle_violations: Vec<(usize, usize, usize)>,
    /// `σ(M) = ∅` only for the zero object.
    pub faithful: bool,
}

impl AxiomReport {
    pub fn passes(&self) -> bool {
        self.supports_closed
            && self.zero_has_empty_support
            && self.sum_violations.is_empty()
            && self.triangle_violations.is_empty()
    }
}

/// Why `f_σ` and `g_σ` fail to be mutually inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassifyingWitness {
    /// `g_σ(f_σ(X)) ≠ X` for the thick subcategory `X`.
    ThickNotRecovered { thick: Bits, support: Bits, back: Bits },
    /// `f_σ(g_σ(W)) ≠ W` for the specialization-closed `W`.
    SubsetNotRealized { subset: Bits, thick: Bits, back: Bits },
    /// `g_σ(W)` is not a fixed point of the thick closure.
    PreimageNotThick { subset: Bits, preimage: Bits },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifyingReport {
    pub thick_count: usize,
    pub spcl_count: usize,
    pub witness: Option<ClassifyingWitness>,
}

impl ClassifyingReport {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

/// `Spec 𝒯` of a model together with `Supp_𝒯`.
#[derive(Debug, Clone)]
pub struct SpectrumResult {
    /// Distinct principal thick subcategories, ordered by mask.
    pub principal: Vec<Bits>,
    /// Irreducible principal thick subcategories; index = spectrum point.
    pub points: Vec<Bits>,
    /// `Supp_𝒯(M)` for every object, as a subset of spectrum points.
    pub supp: Vec<Bits>,
    /// Closed sets of the topology generated by the closed subbasis `supp`.
    pub closed_sets: Vec<Bits>,
    /// Whether the subbasis is already a closed basis (closed under finite
    /// unions up to intersections). Recorded, not assumed.
    pub subbasis_is_basis: bool,
    /// The spectrum as a poset, when the generated topology is T0.
    pub space: Option<SpecSpace>,
    /// Anything the topology computation could not reconcile.
    pub discrepancy: Option<String>,
}

#[derive(Debug, Clone)]
pub struct ReconstructionReport {
    pub spectrum: SpectrumResult,
    /// `phi[x]` is the spectrum point `g_σ(cl{x})`.
    pub phi: Vec<usize>,
    pub homeomorphism: bool,
    /// Objects `M` with `φ(σ(M)) ≠ Supp_𝒯(M)`.
    pub support_mismatches: Vec<usize>,
}

impl ReconstructionReport {
    pub fn passes(&self) -> bool {
        self.homeomorphism && self.support_mismatches.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct TransportReport {
    /// The pulled-back support `τ^F` on the source model's objects.
    pub pulled_back: SupportModel,
    pub pulled_back_axioms: bool,
    pub pulled_back_classifying: bool,
    /// Induced point map from the source space to the target space.
    pub phi: Vec<usize>,
    pub homeomorphism: bool,
    /// Objects `M` with `φ(σ(M)) ≠ τ(F(M))`.
    pub support_mismatches: Vec<usize>,
}

impl TransportReport {
    pub fn passes(&self) -> bool {
        self.pulled_back_axioms
            && self.pulled_back_classifying
            && self.homeomorphism
            && self.support_mismatches.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderTransportReport {
    /// Source points `p` with `φ(W_p) ≠ W_{φ(p)}`.
    pub failures: Vec<usize>,
}

impl OrderTransportReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Builder input for [`SupportModel::new`].
#[derive(Debug, Clone, Default)]
pub struct ModelSpec {
    pub name: String,
    /// Object ids with supports given as point ids.
    pub objects: Vec<(String, Vec<String>)>,
    pub sums: Vec<(String, String, String)>,
    pub triangles: Vec<(String, String, String)>,
    /// `None` for the canonical closure, else rules on object ids.
    pub rules: Option<Vec<(Vec<String>, Vec<String>)>>,
}

impl SupportModel {
    /// Assembles a model. The zero object `"0"` is added with empty
    /// support at index 0 when not declared.
    pub fn new(space: SpecSpace, spec: ModelSpec) -> Result<SupportModel> {
        let mut ids: Vec<String> = Vec::new();
        let mut sigma = Vec::new();
        let mut lookup = HashMap::new();
        if !spec.objects.iter().any(|(id, _)| id == ZERO) {
            lookup.insert(ZERO.to_string(), 0);
            ids.push(ZERO.to_string());
            sigma.push(Bits::EMPTY);
        }
        for (id, supp) in &spec.objects {
            if lookup.insert(id.clone(), ids.len()).is_some() {
                return Err(ModelError::DuplicateObject(id.clone()));
            }
            let mut s = Bits::EMPTY;
            for p in supp {
                s.insert(space.index_of(p)?);
            }
            ids.push(id.clone());
            sigma.push(s);
        }
        if ids.len() > MAX_BITS {
            return Err(ModelError::TooLarge(ids.len()));
        }
        let find = |id: &String| lookup.get(id).copied().ok_or_else(|| ModelError::UnknownObject(id.clone()));
        let mut sums = Vec::new();
        for (a, b, c) in &spec.sums {
            sums.push((find(a)?, find(b)?, find(c)?));
        }
        let mut triangles = Vec::new();
        for (a, b, c) in &spec.triangles {
            triangles.push((find(a)?, find(b)?, find(c)?));
        }
        let closure = match &spec.rules {
            None => ThickClosure::Canonical,
            Some(rules) => {
                let mut out = Vec::new();
                for (lhs, rhs) in rules {
                    let l: Result<Bits> = lhs.iter().map(&find).collect();
                    let r: Result<Bits> = rhs.iter().map(&find).collect();
                    out.push((l?, r?));
                }
                ThickClosure::Rules(out)
            }
        };
        let zero = lookup[ZERO];
        Ok(Self::from_parts(spec.name, space, ids, sigma, sums, triangles, closure, zero))
    }

    #[allow(clippy::too_many_arguments)]
    fn from_parts(
        name: String,
        space: SpecSpace,
        ids: Vec<String>,
        sigma: Vec<Bits>,
        sums: Vec<(usize, usize, usize)>,
        triangles: Vec<(usize, usize, usize)>,
        closure: ThickClosure,
        zero: usize,
    ) -> SupportModel {
        let lookup = ids.iter().enumerate().map(|(i, id)| (id.clone(), i)).collect();
        let objects = ids.into_iter().enumerate().map(|(index, id)| ObjectId { id, index }).collect();
        SupportModel {
            name,
            space,
            objects,
            sigma,
            sums,
            triangles,
            closure,
            zero,
            lookup,
            classifying: OnceLock::new(),
        }
    }

    /// Objects `"0"` and `M[Z]` for every nonempty closed `Z` with
    /// `σ(M[Z]) = Z`; sums `M[Z] ⊕ M[W] = M[Z ∪ W]` for distinct
    /// nonzero pairs; canonical thick closure.
    pub fn canonical(space: &SpecSpace) -> SupportModel {
        let mut closed = space.closed_sets();
        closed.sort();
        let mut ids = vec![ZERO.to_string()];
        let mut sigma = vec![Bits::EMPTY];
        for &z in closed.iter().filter(|z| !z.is_empty()) {
            let names: Vec<&str> = z.iter().map(|p| space.id(p)).collect();
            ids.push(format!("M[{}]", names.join(",")));
            sigma.push(z);
        }
        assert!(ids.len() <= MAX_BITS, "canonical model too large");
        let by_support: HashMap<Bits, usize> = sigma.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let mut sums = Vec::new();
        for i in 1..sigma.len() {
            for j in i + 1..sigma.len() {
                sums.push((i, j, by_support[&(sigma[i] | sigma[j])]));
            }
        }
        Self::from_parts(
            format!("canonical({})", space.name()),
            space.clone(),
            ids,
            sigma,
            sums,
            Vec::new(),
            ThickClosure::Canonical,
            0,
        )
    }

    /// Same objects, sums, triangles and thick subcategories, with a new
    /// space and support.
    pub fn with_support(&self, name: impl Into<String>, space: SpecSpace, sigma: Vec<Bits>) -> SupportModel {
        assert_eq!(sigma.len(), self.len());
        Self::from_parts(
            name.into(),
            space,
            self.objects.iter().map(|o| o.id.clone()).collect(),
            sigma,
            self.sums.clone(),
            self.triangles.clone(),
            ThickClosure::Family(self.thick_subcategories()),
            self.zero,
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn space(&self) -> &SpecSpace {
        &self.space
    }

    pub fn objects(&self) -> &[ObjectId] {
        &self.objects
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn all(&self) -> Bits {
        Bits::full(self.len())
    }

    pub fn closure_mode(&self) -> &ThickClosure {
        &self.closure
    }

    pub fn sums(&self) -> &[(usize, usize, usize)] {
        &self.sums
    }

    pub fn triangles(&self) -> &[(usize, usize, usize)] {
        &self.triangles
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.lookup.get(id).copied().ok_or_else(|| ModelError::UnknownObject(id.to_string()))
    }

    pub fn id(&self, index: usize) -> &str {
        &self.objects[index].id
    }

    pub fn sigma(&self, m: usize) -> Bits {
        self.sigma[m]
    }

    pub fn format_objects(&self, s: Bits) -> String {
        let ids: Vec<&str> = s.iter().map(|m| self.id(m)).collect();
        format!("{{{}}}", ids.join(", "))
    }

    /// `thick(S)`: the smallest thick subcategory containing `s`.
    pub fn thick(&self, s: Bits) -> Bits {
        let s = s | Bits::singleton(self.zero);
        match &self.closure {
            ThickClosure::Canonical => {
                let w = self.f_sigma(s);
                (0..self.len()).filter(|&n| self.sigma[n].is_subset(w)).collect::<Bits>() | s
            }
            ThickClosure::Rules(rules) => self.rule_closure(s, rules),
            ThickClosure::Family(family) => family
                .iter()
                .filter(|t| s.is_subset(**t))
                .fold(self.all(), |acc, &t| acc & t),
        }
    }

    fn rule_closure(&self, start: Bits, rules: &[(Bits, Bits)]) -> Bits {
        let mut x = start;
        loop {
            let before = x;
            for &(lhs, rhs) in rules {
                if lhs.is_subset(x) {
                    x = x | rhs;
                }
            }
            for &(m, n, d) in &self.sums {
                if x.contains(d) {
                    x.insert(m);
                    x.insert(n);
                }
                if x.contains(m) && x.contains(n) {
                    x.insert(d);
                }
            }
            for &(l, m, n) in &self.triangles {
                let count = [l, m, n].iter().filter(|&&o| x.contains(o)).count();
                if count >= 2 {
                    x.insert(l);
                    x.insert(m);
                    x.insert(n);
                }
            }
            if x == before {
                return x;
            }
        }
    }

    pub fn is_thick(&self, s: Bits) -> bool {
        self.thick(s) == s
    }

    /// All thick subcategories (fixed points of the closure), lectic order.
    pub fn thick_subcategories(&self) -> Vec<Bits> {
        lattice::all_closed_sets(self.len(), |s| self.thick(s))
    }

    /// Distinct principal thick subcategories `thick(M)`, ordered by mask.
    pub fn principal_thick_subcategories(&self) -> Vec<Bits> {
        let mut v: Vec<Bits> = (0..self.len()).map(|m| self.thick(Bits::singleton(m))).collect();
        v.sort();
        v.dedup();
        v
    }

    /// `f_σ(X) = ⋃_{M∈X} σ(M)`.
    pub fn f_sigma(&self, x: Bits) -> Bits {
        x.iter().fold(Bits::EMPTY, |acc, m| acc | self.sigma[m])
    }

    /// `g_σ(W) = {M : σ(M) ⊆ W}`.
    pub fn g_sigma(&self, w: Bits) -> Result<Bits> {
        if !self.space.is_specialization_closed(w) {
            return Err(ModelError::NotSpecializationClosed(w));
        }
        Ok(self.g_unchecked(w))
    }

    fn g_unchecked(&self, w: Bits) -> Bits {
        (0..self.len()).filter(|&m| self.sigma[m].is_subset(w)).collect()
    }

    pub fn check_support_axioms(&self) -> AxiomReport {
        let mut sum_violations = Vec::new();
        for &(m, n, d) in &self.sums {
            if self.sigma[d] != self.sigma[m] | self.sigma[n] {
                sum_violations.push((m, n, d));
            }
        }
        // rotations of a triangle are triangles, and shifts act trivially
        let mut triangle_violations = Vec::new();
        for &(l, m, n) in &self.triangles {
            let (sl, sm, sn) = (self.sigma[l], self.sigma[m], self.sigma[n]);
            if !sm.is_subset(sl | sn) || !sn.is_subset(sm | sl) || !sl.is_subset(sm | sn) {
                triangle_violations.push((l, m, n));
            }
        }
        AxiomReport {
            supports_closed: self.sigma.iter().all(|&s| self.space.is_closed(s)),
            zero_has_empty_support: self.sigma[self.zero].is_empty(),
            shift_vacuous: true,
            sum_violations,
            triangle_violations,
            faithful: (0..self.len()).all(|m| m == self.zero || !self.sigma[m].is_empty()),
        }
    }

    /// Exhaustively compares `Th(𝒯)` with `Spcl(X)` under `f_σ`, `g_σ`.
    pub fn is_classifying(&self) -> &ClassifyingReport {
        self.classifying.get_or_init(|| self.compute_classifying())
    }

    fn compute_classifying(&self) -> ClassifyingReport {
        let thicks = self.thick_subcategories();
        let spcl = self.space.specialization_closed_sets();
        let mut witness = None;
        for &w in &spcl {
            let pre = self.g_unchecked(w);
            if !self.is_thick(pre) {
                witness = Some(ClassifyingWitness::PreimageNotThick { subset: w, preimage: pre });
                break;
            }
            let back = self.f_sigma(pre);
            if back != w {
                witness = Some(ClassifyingWitness::SubsetNotRealized { subset: w, thick: pre, back });
                break;
            }
        }
        if witness.is_none() {
            for &x in &thicks {
                let supp = self.f_sigma(x);
                let back = self.g_unchecked(supp);
                if back != x {
                    witness = Some(ClassifyingWitness::ThickNotRecovered { thick: x, support: supp, back });
                    break;
                }
            }
        }
        ClassifyingReport { thick_count: thicks.len(), spcl_count: spcl.len(), witness }
    }

    fn require_classifying(&self) -> Result<()> {
        match &self.is_classifying().witness {
            None => Ok(()),
            Some(w) => Err(ModelError::NotClassifying(format!("{w:?}"))),
        }
    }

    /// An object `M` with `σ(M) = Z`. For irreducible `Z = cl{x}` the
    /// object is found inside `g_σ(Z)` as one whose support contains `x`;
    /// otherwise the smallest-index object with support `Z` is returned.
    pub fn realize_closed(&self, z: Bits) -> Result<usize> {
        self.require_classifying()?;
        if !self.space.is_closed(z) {
            return Err(SpaceError::NotClosed(z).into());
        }
        if z.is_empty() {
            return Ok(self.zero);
        }
        if let Ok(x) = self.space.generic_point(z) {
            let x = x.index;
            let found = self.g_unchecked(z).iter().find(|&m| self.sigma[m].contains(x));
            return match found {
                Some(m) if self.sigma[m] == z => Ok(m),
                _ => Err(ModelError::Inconsistent(format!(
                    "no object in g(Z) has {} in its support",
                    self.space.id(x)
                ))),
            };
        }
        (0..self.len()).find(|&m| self.sigma[m] == z).ok_or_else(|| {
            ModelError::Inconsistent(format!(
                "no object realizes the closed set {}",
                self.space.format_subset(z)
            ))
        })
    }

    /// `Spec 𝒯` with its subbasis-generated topology.
    pub fn spec_of(&self) -> SpectrumResult {
        let principal = self.principal_thick_subcategories();
        let zero_thick = self.thick(Bits::EMPTY);
        let mut points = Vec::new();
        for &x in &principal {
            if x == zero_thick {
                continue;
            }
            let splits = principal.iter().any(|&a| {
                principal.iter().any(|&b| a != x && b != x && self.thick(a | b) == x)
            });
            if !splits {
                points.push(x);
            }
        }
        let supp: Vec<Bits> = (0..self.len())
            .map(|m| {
                let t = self.thick(Bits::singleton(m));
                (0..points.len()).filter(|&i| points[i].is_subset(t)).collect()
            })
            .collect();
        let n = points.len();
        let all = Bits::full(n);
        let unions = close_under(supp.iter().copied().chain([Bits::EMPTY]).collect(), |a, b| a | b);
        let closed_sets = close_under(unions.iter().copied().chain([all]).collect(), |a, b| a & b);
        let basis_generated = close_under(supp.iter().copied().chain([all]).collect(), |a, b| a & b);
        let subbasis_is_basis = basis_generated == closed_sets;

        let point_closures: Vec<Bits> = (0..n)
            .map(|i| closed_sets.iter().filter(|c| c.contains(i)).fold(all, |acc, &c| acc & c))
            .collect();
        let ids: Vec<String> = points
            .iter()
            .map(|&x| {
                let gen = (0..self.len()).find(|&m| self.thick(Bits::singleton(m)) == x).unwrap_or(0);
                format!("thick({})", self.id(gen))
            })
            .collect();
        let (space, discrepancy) =
            match SpecSpace::from_closures(format!("Spec {}", self.name), &ids, point_closures) {
                Ok(s) => {
                    let mut ups = s.closed_sets();
                    ups.sort();
                    if ups == closed_sets {
                        (Some(s), None)
                    } else {
                        (Some(s), Some("generated closed sets differ from specialization up-sets".into()))
                    }
                }
                Err(e) => (None, Some(format!("spectrum topology is not T0: {e}"))),
            };
        SpectrumResult { principal, points, supp, closed_sets, subbasis_is_basis, space, discrepancy }
    }

    /// Builds `φ: X → Spec 𝒯`, `x ↦ g_σ(cl{x})`, and checks it.
    pub fn verify_reconstruction(&self) -> Result<ReconstructionReport> {
        self.require_classifying()?;
        let spectrum = self.spec_of();
        let mut phi = Vec::with_capacity(self.space.len());
        for x in 0..self.space.len() {
            let target = self.g_unchecked(self.space.point_closure(x));
            match spectrum.points.iter().position(|&p| p == target) {
                Some(i) => phi.push(i),
                None => {
                    return Err(ModelError::Inconsistent(format!(
                        "g(cl{{{}}}) is not an irreducible principal thick subcategory",
                        self.space.id(x)
                    )))
                }
            }
        }
        let homeomorphism = match &spectrum.space {
            Some(s) => spectral_space::check_homeomorphism(&self.space, s, &phi)?,
            None => false,
        };
        let support_mismatches = (0..self.len())
            .filter(|&m| SpecSpace::map_subset(&phi, self.sigma[m]) != spectrum.supp[m])
            .collect();
        Ok(ReconstructionReport { spectrum, phi, homeomorphism, support_mismatches })
    }

    /// Pulls the support of `target` back along the object bijection `map`
    /// (`map[M]` is `F(M)`) and derives the induced homeomorphism
    /// `source.space → target.space`.
    pub fn transport_support(&self, target: &SupportModel, map: &[usize]) -> Result<TransportReport> {
        let n = self.len();
        if map.len() != n || target.len() != n {
            return Err(ModelError::NotCompatible("object counts differ".into()));
        }
        let mut inverse = vec![usize::MAX; n];
        for (m, &fm) in map.iter().enumerate() {
            if fm >= n || inverse[fm] != usize::MAX {
                return Err(ModelError::NotCompatible(format!("not a bijection at `{}`", self.id(m))));
            }
            inverse[fm] = m;
        }
        if map[self.zero] != target.zero {
            return Err(ModelError::NotCompatible("F(0) is not 0".into()));
        }
        let image = |s: Bits, f: &[usize]| -> Bits { s.iter().map(|m| f[m]).collect() };
        let source_thicks = self.thick_subcategories();
        for &x in &source_thicks {
            let fx = image(x, map);
            if !target.is_thick(fx) {
                return Err(ModelError::NotCompatible(format!(
                    "F{} = {} is not thick",
                    self.format_objects(x),
                    target.format_objects(fx)
                )));
            }
        }
        for y in target.thick_subcategories() {
            let gy = image(y, &inverse);
            if !self.is_thick(gy) {
                return Err(ModelError::NotCompatible(format!(
                    "F^-1{} = {} is not thick",
                    target.format_objects(y),
                    self.format_objects(gy)
                )));
            }
        }
        let pulled_sigma: Vec<Bits> = (0..n).map(|m| target.sigma[map[m]]).collect();
        let pulled_back = Self::from_parts(
            format!("{}^F", target.name),
            target.space.clone(),
            self.objects.iter().map(|o| o.id.clone()).collect(),
            pulled_sigma,
            self.sums.clone(),
            self.triangles.clone(),
            ThickClosure::Family(source_thicks),
            self.zero,
        );
        let pulled_back_axioms = pulled_back.check_support_axioms().passes();
        let pulled_back_classifying = pulled_back.is_classifying().holds();
        self.require_classifying()?;
        if !pulled_back_classifying {
            return Err(ModelError::NotClassifying("pulled-back support".into()));
        }
        // both spaces classify Th(source); match points through g(cl{-})
        let target_points: HashMap<Bits, usize> = (0..target.space.len())
            .map(|y| (pulled_back.g_unchecked(target.space.point_closure(y)), y))
            .collect();
        let mut phi = Vec::with_capacity(self.space.len());
        for x in 0..self.space.len() {
            let thick = self.g_unchecked(self.space.point_closure(x));
            let y = target_points.get(&thick).copied().ok_or_else(|| {
                ModelError::Inconsistent(format!("no target point for {}", self.space.id(x)))
            })?;
            phi.push(y);
        }
        let homeomorphism = spectral_space::check_homeomorphism(&self.space, &target.space, &phi)?;
        let support_mismatches = (0..n)
            .filter(|&m| SpecSpace::map_subset(&phi, self.sigma[m]) != target.sigma[map[m]])
            .collect();
        Ok(TransportReport {
            pulled_back,
            pulled_back_axioms,
            pulled_back_classifying,
            phi,
            homeomorphism,
            support_mismatches,
        })
    }

    /// `W_p = {q : p ∉ cl{q}}`, the specialization-closed set whose
    /// preimage is killed by localizing at `p`.
    pub fn localizing_subset(space: &SpecSpace, p: usize) -> Bits {
        (0..space.len()).filter(|&q| !space.specializes(p, q)).collect()
    }

    /// Checks `φ(W_p) = W_{φ(p)}` for every source point.
    pub fn check_order_transport(a: &SpecSpace, b: &SpecSpace, phi: &[usize]) -> OrderTransportReport {
        let failures = (0..a.len())
            .filter(|&p| {
                SpecSpace::map_subset(phi, Self::localizing_subset(a, p)) != Self::localizing_subset(b, phi[p])
            })
            .collect();
        OrderTransportReport { failures }
    }

    /// `g_σ(W_p)` coincides with `{M : p ∉ σ(M)}`.
    pub fn kill_set_matches(&self, p: usize) -> bool {
        let killed = self.g_unchecked(Self::localizing_subset(&self.space, p));
        let expected: Bits = (0..self.len()).filter(|&m| !self.sigma[m].contains(p)).collect();
        killed == expected
    }

    /// Model of the Verdier quotient `𝒯 / g_σ(W)`: objects of `g_σ(W)`
    /// become zero, the space is `X ∖ W`, supports are restricted.
    pub fn quotient_model(&self, w: Bits) -> Result<SupportModel> {
        let killed = self.g_sigma(w)?;
        self.require_classifying()?;
        let keep = self.space.all() - w;
        let removed: Vec<&str> = w.iter().map(|p| self.space.id(p)).collect();
        let space = self.space.subspace(format!("{}-{}", self.space.name(), removed.join("-")), keep);
        let point_map: Vec<usize> = {
            let mut v = vec![usize::MAX; self.space.len()];
            for (i, p) in keep.iter().enumerate() {
                v[p] = i;
            }
            v
        };
        let mut ids = vec![ZERO.to_string()];
        let mut sigma = vec![Bits::EMPTY];
        let mut proj = vec![0usize; self.len()];
        for m in 0..self.len() {
            if killed.contains(m) || m == self.zero {
                continue;
            }
            proj[m] = ids.len();
            ids.push(self.id(m).to_string());
            sigma.push((self.sigma[m] & keep).iter().map(|p| point_map[p]).collect());
        }
        let map_set = |s: Bits| -> Bits { s.iter().map(|m| proj[m]).collect() };
        let mut sums: Vec<_> = self.sums.iter().map(|&(a, b, c)| (proj[a], proj[b], proj[c])).collect();
        sums.sort();
        sums.dedup();
        let mut triangles: Vec<_> =
            self.triangles.iter().map(|&(a, b, c)| (proj[a], proj[b], proj[c])).collect();
        triangles.sort();
        triangles.dedup();
        let closure = match &self.closure {
            ThickClosure::Canonical => ThickClosure::Canonical,
            ThickClosure::Rules(rules) => {
                ThickClosure::Rules(rules.iter().map(|&(l, r)| (map_set(l), map_set(r))).collect())
            }
            ThickClosure::Family(family) => ThickClosure::Family(
                family.iter().filter(|t| killed.is_subset(**t)).map(|&t| map_set(t)).collect(),
            ),
        };
        Ok(Self::from_parts(
            format!("{}/{}", self.name, self.space.format_subset(w)),
            space,
            ids,
            sigma,
            sums,
            triangles,
            closure,
            0,
        ))
    }

    /// Order-independent description used to compare models up to the
    /// identification of objects by id: object ids with point-id supports,
    /// and the thick subcategories as sorted id lists.
    pub fn structure_key(&self) -> (Vec<(String, Vec<String>)>, Vec<Vec<String>>) {
        let mut objs: Vec<(String, Vec<String>)> = (0..self.len())
            .map(|m| {
                let mut s: Vec<String> =
                    self.sigma[m].iter().map(|p| self.space.id(p).to_string()).collect();
                s.sort();
                (self.id(m).to_string(), s)
            })
            .collect();
        objs.sort();
        let mut thicks: Vec<Vec<String>> = self
            .thick_subcategories()
            .into_iter()
            .map(|t| {
                let mut v: Vec<String> = t.iter().map(|m| self.id(m).to_string()).collect();
                v.sort();
                v
            })
            .collect();
        thicks.sort();
        (objs, thicks)
    }

    /// Serialization in the model file format.
    pub fn to_text(&self) -> String {
        let mut s = format!("model {}\nuse_space {}\n", self.name, self.space.name());
        for m in 0..self.len() {
            let pts: Vec<&str> = self.sigma[m].iter().map(|p| self.space.id(p)).collect();
            if pts.is_empty() {
                s.push_str(&format!("object {} supp {{}}\n", self.id(m)));
            } else {
                s.push_str(&format!("object {} supp {{ {} }}\n", self.id(m), pts.join(" ")));
            }
        }
        for &(a, b, c) in &self.sums {
            s.push_str(&format!("sum {} {} -> {}\n", self.id(a), self.id(b), self.id(c)));
        }
        for &(a, b, c) in &self.triangles {
            s.push_str(&format!("triangle {} {} {}\n", self.id(a), self.id(b), self.id(c)));
        }
        let ids = |b: Bits| b.iter().map(|m| self.id(m).to_string()).collect::<Vec<_>>().join(" ");
        match &self.closure {
            ThickClosure::Canonical => s.push_str("closure canonical\n"),
            ThickClosure::Rules(rules) => {
                s.push_str("closure explicit {\n");
                for &(l, r) in rules {
                    s.push_str(&format!("  {{ {} }} -> {{ {} }}\n", ids(l), ids(r)));
                }
                s.push_str("}\n");
            }
            ThickClosure::Family(family) => {
                // X ∪ {m} -> cl(X ∪ {m}) over members X; any set closed
                // under these is itself a member
                s.push_str("closure explicit {\n");
                let mut seen = Vec::new();
                for &x in family {
                    for m in 0..self.len() {
                        let l = x | Bits::singleton(m);
                        let r = self.thick(l);
                        if r != l && !seen.contains(&l) {
                            seen.push(l);
                            s.push_str(&format!("  {{ {} }} -> {{ {} }}\n", ids(l), ids(r)));
                        }
                    }
                }
                s.push_str("}\n");
            }
        }
        s
    }
}

fn close_under(seed: Vec<Bits>, op: impl Fn(Bits, Bits) -> Bits) -> Vec<Bits> {
    let mut set: std::collections::BTreeSet<Bits> = seed.into_iter().collect();
    loop {
        let items: Vec<Bits> = set.iter().copied().collect();
        let before = set.len();
        for (i, &a) in items.iter().enumerate() {
            for &b in &items[i + 1..] {
                set.insert(op(a, b));
            }
        }
        if set.len() == before {
            return set.into_iter().collect();
        }
    }
}

/// A parsed model file: the model plus any tensor-block lines, which are
/// interpreted by [`crate::tensor_model`].
#[derive(Debug, Clone)]
pub struct ModelFile {
    pub model: SupportModel,
    pub space_name: String,
    pub tensor_lines: Vec<(usize, String)>,
}

/// Parses the model file format against the given spaces:
///
/// ```text
/// model m
/// use_space chain
/// object A supp { p1 }
/// object B supp { p0 p1 }
/// sum A A -> A
/// triangle A B B
/// closure canonical
/// ```
///
/// `closure explicit { { A } -> { B } ... }` may span several lines.
pub fn parse_model(src: &str, spaces: &[SpecSpace]) -> Result<ModelFile> {
    let lines = text::lines(src);
    let mut name = None;
    let mut space_name: Option<(Line, String)> = None;
    let mut spec = ModelSpec::default();
    let mut refs: Vec<(Line, usize, String)> = Vec::new();
    let mut tensor_lines = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let line = &lines[i];
        let words = line.words();
        match words[0].1 {
            "model" if words.len() == 2 => name = Some(words[1].1.to_string()),
            "use_space" if words.len() == 2 => space_name = Some((line.clone(), words[1].1.to_string())),
            "object" => {
                if words.len() < 3 || words[2].1 != "supp" {
                    return Err(line.error(0, "expected `object <id> supp { <points> }`").into());
                }
                let (_, inner, rest) = text::braced(line.text)
                    .ok_or_else(|| line.error(words[2].0, "expected `{ <points> }`"))?;
                if !rest.trim().is_empty() {
                    return Err(line.error(line.text.len() - rest.len(), "trailing input").into());
                }
                let pts = inner.split_whitespace().map(str::to_string).collect();
                spec.objects.push((words[1].1.to_string(), pts));
            }
            "sum" if words.len() == 5 && words[3].1 == "->" => {
                for k in [1, 2, 4] {
                    refs.push((line.clone(), words[k].0, words[k].1.to_string()));
                }
                spec.sums.push((words[1].1.into(), words[2].1.into(), words[4].1.into()));
            }
            "triangle" if words.len() == 4 => {
                for k in [1, 2, 3] {
                    refs.push((line.clone(), words[k].0, words[k].1.to_string()));
                }
                spec.triangles.push((words[1].1.into(), words[2].1.into(), words[3].1.into()));
            }
            "closure" if words.len() == 2 && words[1].1 == "canonical" => spec.rules = None,
            "closure" if words.len() >= 2 && words[1].1.starts_with("explicit") => {
                // gather lines until braces balance
                let mut body = line.text.to_string();
                let start = line.clone();
                while body.matches('{').count() > body.matches('}').count() {
                    i += 1;
                    let next = lines.get(i).ok_or_else(|| start.error(0, "unterminated closure block"))?;
                    body.push(' ');
                    body.push_str(next.text);
                }
                let (_, inner, _) =
                    text::braced(&body).ok_or_else(|| start.error(0, "expected `explicit { ... }`"))?;
                spec.rules = Some(parse_rules(inner, &start)?);
            }
            "tensor" | "prod" => tensor_lines.push((line.number, line.text.to_string())),
            _ => return Err(line.error(0, format!("unrecognized line `{}`", line.text)).into()),
        }
        i += 1;
    }
    spec.name = name.ok_or_else(|| ParseError::new(1, 1, "missing `model <name>` header"))?;
    let (space_line, space_name) =
        space_name.ok_or_else(|| ParseError::new(1, 1, "missing `use_space <name>`"))?;
    let space = spaces
        .iter()
        .find(|s| s.name() == space_name)
        .ok_or_else(|| space_line.error(10, format!("dangling reference to space `{space_name}`")))?;
    // point references, with locations
    for line in &lines {
        let words = line.words();
        if words[0].1 == "object" {
            if let Some((off, inner, _)) = text::braced(line.text) {
                let probe = Line { number: line.number, indent: line.indent, text: inner };
                for (o, p) in probe.words() {
                    if space.index_of(p).is_err() {
                        return Err(line
                            .error(off + o, format!("dangling reference to point `{p}`"))
                            .into());
                    }
                }
            }
        }
    }
    let declared: std::collections::HashSet<&str> =
        spec.objects.iter().map(|(id, _)| id.as_str()).chain([ZERO]).collect();
    for (line, off, id) in &refs {
        if !declared.contains(id.as_str()) {
            return Err(line.error(*off, format!("dangling reference to object `{id}`")).into());
        }
    }
    let model = SupportModel::new(space.clone(), spec)?;
    Ok(ModelFile { model, space_name, tensor_lines })
}

fn parse_rules(inner: &str, line: &Line) -> Result<Vec<(Vec<String>, Vec<String>)>> {
    let mut rules = Vec::new();
    let mut rest = inner;
    loop {
        let trimmed = rest.trim_start().trim_start_matches([',', ';']).trim_start();
        if trimmed.is_empty() {
            return Ok(rules);
        }
        let (_, lhs, after) =
            text::braced(trimmed).ok_or_else(|| line.error(0, "expected `{ <ids> } -> { <ids> }`"))?;
        let after = after.trim_start();
        let after = after
            .strip_prefix("->")
            .ok_or_else(|| line.error(0, "expected `->` in closure rule"))?;
        let (_, rhs, after) =
            text::braced(after).ok_or_else(|| line.error(0, "expected `{ <ids> }` after `->`"))?;
        let words = |s: &str| s.split_whitespace().map(str::to_string).collect::<Vec<_>>();
        rules.push((words(lhs), words(rhs)));
        rest = after;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain() -> SpecSpace {
        SpecSpace::chain("chain", &["p0", "p1"])
    }

    fn fan() -> SpecSpace {
        SpecSpace::from_covers("fan", &["g", "m1", "m2"], &[(0, 1), (0, 2)]).unwrap()
    }

    #[test]
    fn canonical_model_objects() {
        let one = SpecSpace::antichain("one", &["p"]);
        assert_eq!(SupportModel::canonical(&one).len(), 2);
        let c = SupportModel::canonical(&chain());
        let ids: Vec<&str> = c.objects().iter().map(|o| o.id.as_str()).collect();
        assert_eq!(ids, vec!["0", "M[p1]", "M[p0,p1]"]);
        let anti = SpecSpace::antichain("a", &["a", "b"]);
        assert_eq!(SupportModel::canonical(&anti).len(), 4);
    }

    #[test]
    fn canonical_models_satisfy_axioms() {
        for space in [chain(), fan(), SpecSpace::antichain("a", &["a", "b", "c"])] {
            let m = SupportModel::canonical(&space);
            let r = m.check_support_axioms();
            assert!(r.passes() && r.faithful, "{r:?}");
            assert!(m.is_classifying().holds());
        }
    }

    #[test]
    fn axiom_failures() {
        let spec = ModelSpec {
            name: "bad".into(),
            objects: vec![("0".into(), vec!["p1".into()])],
            ..Default::default()
        };
        let m = SupportModel::new(chain(), spec).unwrap();
        assert!(!m.check_support_axioms().zero_has_empty_support);

        let spec = ModelSpec {
            name: "badsum".into(),
            objects: vec![
                ("A".into(), vec!["p1".into()]),
                ("B".into(), vec!["p0".into(), "p1".into()]),
                ("D".into(), vec!["p1".into()]),
            ],
            sums: vec![("A".into(), "B".into(), "D".into())],
            ..Default::default()
        };
        let m = SupportModel::new(chain(), spec).unwrap();
        assert_eq!(m.check_support_axioms().sum_violations.len(), 1);
    }

    #[test]
    fn f_and_g_examples() {
        let c = SupportModel::canonical(&chain());
        assert_eq!(c.f_sigma(Bits::singleton(0)), Bits::EMPTY);
        assert_eq!(c.f_sigma(c.all()), Bits::full(2));
        let t = c.thick(Bits::singleton(1));
        assert_eq!(c.f_sigma(t), Bits::singleton(1));
        assert_eq!(c.g_sigma(Bits::EMPTY).unwrap(), Bits::singleton(0));
        assert_eq!(c.g_sigma(Bits::full(2)).unwrap(), c.all());
        assert_eq!(c.g_sigma(Bits::singleton(1)).unwrap(), Bits::from_indices([0, 1]));
        assert!(matches!(c.g_sigma(Bits::singleton(0)), Err(ModelError::NotSpecializationClosed(_))));
    }

    #[test]
    fn equal_supports_with_separate_thicks_are_not_classifying() {
        let spec = ModelSpec {
            name: "twins".into(),
            objects: vec![("M".into(), vec!["p".into()]), ("N".into(), vec!["p".into()])],
            rules: Some(vec![]),
            ..Default::default()
        };
        let m = SupportModel::new(SpecSpace::antichain("one", &["p"]), spec).unwrap();
        let r = m.is_classifying();
        assert!(!r.holds());
        assert!(matches!(r.witness, Some(ClassifyingWitness::ThickNotRecovered { .. })
            | Some(ClassifyingWitness::PreimageNotThick { .. })));
    }

    #[test]
    fn unrealized_closed_set_is_not_classifying() {
        // only the closed point is realized; W = X has f(g(W)) = {p1}
        let spec = ModelSpec {
            name: "partial".into(),
            objects: vec![("A".into(), vec!["p1".into()])],
            ..Default::default()
        };
        let m = SupportModel::new(chain(), spec).unwrap();
        assert!(matches!(
            m.is_classifying().witness,
            Some(ClassifyingWitness::SubsetNotRealized { .. })
        ));
        assert!(matches!(m.realize_closed(Bits::full(2)), Err(ModelError::NotClassifying(_))));
    }

    #[test]
    fn realization() {
        let c = SupportModel::canonical(&fan());
        assert_eq!(c.realize_closed(Bits::EMPTY).unwrap(), 0);
        for z in fan().closed_sets() {
            let m = c.realize_closed(z).unwrap();
            assert_eq!(c.sigma(m), z);
        }
        // redundant objects: smallest index wins
        let spec = ModelSpec {
            name: "redundant".into(),
            objects: vec![
                ("A".into(), vec!["p1".into()]),
                ("A2".into(), vec!["p1".into()]),
                ("B".into(), vec!["p0".into(), "p1".into()]),
            ],
            ..Default::default()
        };
        let m = SupportModel::new(chain(), spec).unwrap();
        assert!(m.is_classifying().holds());
        assert_eq!(m.id(m.realize_closed(Bits::singleton(1)).unwrap()), "A");
    }

    #[test]
    fn spectra_of_small_models() {
        let one = SupportModel::canonical(&SpecSpace::antichain("one", &["p"]));
        assert_eq!(one.spec_of().points.len(), 1);
        let c = SupportModel::canonical(&chain()).spec_of();
        assert_eq!(c.points.len(), 2);
        let s = c.space.unwrap();
        assert_eq!(s.closed_sets().len(), 3);
        let a = SupportModel::canonical(&SpecSpace::antichain("a", &["a", "b"])).spec_of();
        assert_eq!(a.points.len(), 2);
        assert_eq!(a.space.unwrap().closed_sets().len(), 4);
    }

    #[test]
    fn reconstruction_of_fan() {
        let m = SupportModel::canonical(&fan());
        let r = m.verify_reconstruction().unwrap();
        assert!(r.passes());
        // φ(g) = thick(M[g,m1,m2])
        let g_point = r.phi[0];
        assert_eq!(r.spectrum.points[g_point], m.thick(Bits::singleton(m.index_of("M[g,m1,m2]").unwrap())));
    }

    #[test]
    fn reconstruction_refuses_non_classifying() {
        let spec = ModelSpec {
            name: "partial".into(),
            objects: vec![("A".into(), vec!["p1".into()])],
            ..Default::default()
        };
        let m = SupportModel::new(chain(), spec).unwrap();
        assert!(matches!(m.verify_reconstruction(), Err(ModelError::NotClassifying(_))));
    }

    #[test]
    fn identity_transport() {
        let m = SupportModel::canonical(&fan());
        let id: Vec<usize> = (0..m.len()).collect();
        let r = m.transport_support(&m, &id).unwrap();
        assert!(r.passes());
        assert_eq!(r.phi, vec![0, 1, 2]);
    }

    #[test]
    fn incompatible_transport_is_rejected() {
        let c = SupportModel::canonical(&chain());
        // swap M[p1] and M[p0,p1]
        let err = c.transport_support(&c, &[0, 2, 1]).unwrap_err();
        assert!(matches!(err, ModelError::NotCompatible(_)));
    }

    #[test]
    fn quotients() {
        let c = SupportModel::canonical(&chain());
        let same = c.quotient_model(Bits::EMPTY).unwrap();
        assert_eq!(same.structure_key(), c.structure_key());
        let trivial = c.quotient_model(Bits::full(2)).unwrap();
        assert_eq!(trivial.len(), 1);
        assert!(trivial.space().is_empty());
        let q = c.quotient_model(Bits::singleton(1)).unwrap();
        assert_eq!(q.space().len(), 1);
        assert_eq!(q.space().id(0), "p0");
        assert!(q.is_classifying().holds());
        assert!(matches!(c.quotient_model(Bits::singleton(0)), Err(ModelError::NotSpecializationClosed(_))));
    }

    #[test]
    fn localization_kill_sets() {
        let m = SupportModel::canonical(&fan());
        for p in 0..3 {
            assert!(m.kill_set_matches(p));
        }
        assert_eq!(SupportModel::localizing_subset(m.space(), 1), Bits::singleton(2));
    }

    #[test]
    fn parse_model_file() {
        let src = "model m\nuse_space chain\nobject A supp { p1 }\nobject B supp { p0 p1 }\n\
                   sum A B -> B\nclosure canonical\n";
        let mf = parse_model(src, &[chain()]).unwrap();
        assert_eq!(mf.model.len(), 3);
        assert!(mf.model.is_classifying().holds());
        let round = parse_model(&mf.model.to_text(), &[chain()]).unwrap();
        assert_eq!(round.model.structure_key(), mf.model.structure_key());
    }

    #[test]
    fn parse_model_errors() {
        let src = "model m\nuse_space chain\nobject M supp {nosuchpoint}\n";
        match parse_model(src, &[chain()]) {
            Err(ModelError::Parse(e)) => {
                assert_eq!(e.line, 3);
                assert!(e.message.contains("nosuchpoint"));
            }
            other => panic!("unexpected {other:?}"),
        }
        let src = "model m\nuse_space chain\nobject A supp { p1 }\nsum A Z -> A\n";
        assert!(matches!(parse_model(src, &[chain()]), Err(ModelError::Parse(_))));
        let src = "model m\nuse_space other\n";
        assert!(matches!(parse_model(src, &[chain()]), Err(ModelError::Parse(_))));
    }

    #[test]
    fn explicit_closure_block() {
        let src = "model m\nuse_space one\nobject M supp { p }\nobject N supp { p }\n\
                   closure explicit {\n  { M } -> { N }\n  { N } -> { M }\n}\n";
        let mf = parse_model(src, &[SpecSpace::antichain("one", &["p"])]).unwrap();
        assert!(mf.model.is_classifying().holds());
    }
}
