//! Finite posets as models of noetherian sober spaces.
//!
//! Convention used throughout the crate: `p ⇝ q` ("q specializes p") means
//! `q ∈ cl{p}`. Closed sets are exactly the subsets that are upward closed
//! under `⇝`, so `cl{p}` is the principal up-set of `p`. This matches
//! `Spec R`, where `cl{p} = V(p)` and closed points are maximal ideals.
//!
//! Every finite poset is a noetherian sober space in this topology, and
//! specialization-closed subsets coincide with closed subsets.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::bitset::{Bits, MAX_BITS};
use crate::lattice;
use crate::text::{self, ParseError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpaceError {
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("duplicate point `{0}`")]
    DuplicatePoint(String),
    #[error("specialization relation has a cycle through `{0}`")]
    Cycle(String),
    #[error("relation is not a partial order: {0}")]
    NotPartialOrder(String),
    #[error("subset {0:?} is not closed")]
    NotClosed(Bits),
    #[error("closed set {0:?} is not irreducible")]
    NotIrreducible(Bits),
    #[error("point map is not total: no image for `{0}`")]
    NotTotal(String),
    #[error("space has {0} points; at most {MAX_BITS} are supported")]
    TooLarge(usize),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T> = std::result::Result<T, SpaceError>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point {
    pub id: String,
    pub index: usize,
}

/// A closed subset of some [`SpecSpace`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClosedSet(Bits);

impl ClosedSet {
    pub fn bits(self) -> Bits {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyTag {
    Cl,
    Spcl,
    Irr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetFamily {
    pub tag: FamilyTag,
    pub members: Vec<Bits>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Families {
    pub closed: SubsetFamily,
    pub specialization_closed: SubsetFamily,
    pub irreducible: SubsetFamily,
}

/// A finite T0 space presented by its specialization order.
#[derive(Clone, PartialEq, Eq)]
pub struct SpecSpace {
    name: String,
    points: Vec<Point>,
    /// `closures[p]` is the bitset of `cl{p}`.
    closures: Vec<Bits>,
    lookup: HashMap<String, usize>,
}

impl fmt::Debug for SpecSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text())
    }
}

impl SpecSpace {
    /// Builds a space from covering relations `(p, q)` meaning `p ⇝ q`.
    /// The reflexive-transitive closure is computed; cycles are rejected.
    pub fn from_covers(
        name: impl Into<String>,
        ids: &[impl AsRef<str>],
        covers: &[(usize, usize)],
    ) -> Result<SpecSpace> {
        let n = ids.len();
        if n > MAX_BITS {
            return Err(SpaceError::TooLarge(n));
        }
        let mut closures: Vec<Bits> = (0..n).map(Bits::singleton).collect();
        for &(p, q) in covers {
            closures[p].insert(q);
        }
        // Warshall on bitsets
        for k in 0..n {
            for p in 0..n {
                if closures[p].contains(k) {
                    closures[p] = closures[p] | closures[k];
                }
            }
        }
        for p in 0..n {
            for q in closures[p].iter() {
                if q != p && closures[q].contains(p) {
                    return Err(SpaceError::Cycle(ids[p].as_ref().to_string()));
                }
            }
        }
        Self::assemble(name.into(), ids, closures)
    }

    /// Builds a space from explicit point closures, validating that they
    /// describe a partial order.
    pub fn from_closures(
        name: impl Into<String>,
        ids: &[impl AsRef<str>],
        closures: Vec<Bits>,
    ) -> Result<SpecSpace> {
        let n = ids.len();
        if n > MAX_BITS {
            return Err(SpaceError::TooLarge(n));
        }
        if closures.len() != n {
            return Err(SpaceError::NotPartialOrder("closure count mismatch".into()));
        }
        let all = Bits::full(n);
        for p in 0..n {
            if !closures[p].contains(p) {
                return Err(SpaceError::NotPartialOrder(format!("not reflexive at {p}")));
            }
            if !closures[p].is_subset(all) {
                return Err(SpaceError::NotPartialOrder(format!("out of range at {p}")));
            }
            for q in closures[p].iter() {
                if !closures[q].is_subset(closures[p]) {
                    return Err(SpaceError::NotPartialOrder(format!("not transitive at {p}")));
                }
                if q != p && closures[q].contains(p) {
                    return Err(SpaceError::NotPartialOrder(format!("not antisymmetric at {p}")));
                }
            }
        }
        Self::assemble(name.into(), ids, closures)
    }

    fn assemble(name: String, ids: &[impl AsRef<str>], closures: Vec<Bits>) -> Result<SpecSpace> {
        let mut lookup = HashMap::new();
        let mut points = Vec::with_capacity(ids.len());
        for (index, id) in ids.iter().enumerate() {
            let id = id.as_ref().to_string();
            if lookup.insert(id.clone(), index).is_some() {
                return Err(SpaceError::DuplicatePoint(id));
            }
            points.push(Point { id, index });
        }
        Ok(SpecSpace { name, points, closures, lookup })
    }

    /// The discrete space on the given ids.
    pub fn antichain(name: impl Into<String>, ids: &[impl AsRef<str>]) -> SpecSpace {
        Self::from_covers(name, ids, &[]).expect("antichain is a poset")
    }

    /// The chain `ids[0] ⇝ ids[1] ⇝ ...`.
    pub fn chain(name: impl Into<String>, ids: &[impl AsRef<str>]) -> SpecSpace {
        let covers: Vec<_> = (1..ids.len()).map(|i| (i - 1, i)).collect();
        Self::from_covers(name, ids, &covers).expect("chain is a poset")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn all(&self) -> Bits {
        Bits::full(self.len())
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.lookup.get(id).copied().ok_or_else(|| SpaceError::UnknownPoint(id.to_string()))
    }

    pub fn id(&self, index: usize) -> &str {
        &self.points[index].id
    }

    /// Bitset of `cl{p}`.
    pub fn point_closure(&self, p: usize) -> Bits {
        self.closures[p]
    }

    /// Does `q` specialize `p` (i.e. `q ∈ cl{p}`)?
    pub fn specializes(&self, q: usize, p: usize) -> bool {
        self.closures[p].contains(q)
    }

    pub fn closure(&self, id: &str) -> Result<ClosedSet> {
        let p = self.index_of(id)?;
        Ok(ClosedSet(self.closures[p]))
    }

    /// Smallest closed set containing `s`.
    pub fn closure_of_set(&self, s: Bits) -> Bits {
        s.iter().fold(Bits::EMPTY, |acc, p| acc | self.closures[p])
    }

    pub fn is_specialization_closed(&self, s: Bits) -> bool {
        s.is_subset(self.all()) && self.closure_of_set(s) == s
    }

    /// On finite spaces closed and specialization-closed coincide.
    pub fn is_closed(&self, s: Bits) -> bool {
        self.is_specialization_closed(s)
    }

    pub fn closed(&self, s: Bits) -> Result<ClosedSet> {
        if self.is_closed(s) {
            Ok(ClosedSet(s))
        } else {
            Err(SpaceError::NotClosed(s))
        }
    }

    /// Maximal point closures inside `z`, ordered by generic point index.
    pub fn irreducible_components(&self, z: Bits) -> Result<Vec<ClosedSet>> {
        if !self.is_closed(z) {
            return Err(SpaceError::NotClosed(z));
        }
        let mut comps = Vec::new();
        for p in z.iter() {
            let c = self.closures[p];
            let dominated = z
                .iter()
                .any(|q| q != p && c.is_subset(self.closures[q]) && c != self.closures[q]);
            if !dominated {
                comps.push(ClosedSet(c));
            }
        }
        Ok(comps)
    }

    pub fn is_irreducible(&self, z: Bits) -> bool {
        z.iter().any(|p| self.closures[p] == z)
    }

    /// The unique point whose closure is `z`.
    pub fn generic_point(&self, z: Bits) -> Result<&Point> {
        if !self.is_closed(z) {
            return Err(SpaceError::NotClosed(z));
        }
        let mut found = z.iter().filter(|&p| self.closures[p] == z);
        match (found.next(), found.next()) {
            (Some(p), None) => Ok(&self.points[p]),
            _ => Err(SpaceError::NotIrreducible(z)),
        }
    }

    /// All closed subsets, in lectic order (via NextClosure).
    pub fn closed_sets(&self) -> Vec<Bits> {
        lattice::all_closed_sets(self.len(), |s| self.closure_of_set(s))
    }

    /// All specialization-closed subsets, found by filtering the power set
    /// when it is small enough, so it does not share a code path with
    /// [`closed_sets`](Self::closed_sets).
    pub fn specialization_closed_sets(&self) -> Vec<Bits> {
        if self.len() <= 16 {
            (0u128..(1u128 << self.len()))
                .map(Bits)
                .filter(|&s| self.is_specialization_closed(s))
                .collect()
        } else {
            self.closed_sets()
        }
    }

    /// Irreducible closed subsets: the point closures, without repetition.
    pub fn irreducible_sets(&self) -> Vec<Bits> {
        let mut v: Vec<Bits> = self.closures.clone();
        v.sort();
        v.dedup();
        v
    }

    pub fn enumerate_families(&self) -> Families {
        let mut closed = self.closed_sets();
        closed.sort();
        Families {
            closed: SubsetFamily { tag: FamilyTag::Cl, members: closed },
            specialization_closed: SubsetFamily {
                tag: FamilyTag::Spcl,
                members: self.specialization_closed_sets(),
            },
            irreducible: SubsetFamily { tag: FamilyTag::Irr, members: self.irreducible_sets() },
        }
    }

    /// Image of a subset under a point map given by indices.
    pub fn map_subset(map: &[usize], s: Bits) -> Bits {
        s.iter().map(|p| map[p]).collect()
    }

    /// Subspace on `keep`, with the induced order. Point order is preserved.
    pub fn subspace(&self, name: impl Into<String>, keep: Bits) -> SpecSpace {
        let old: Vec<usize> = keep.iter().collect();
        let ids: Vec<&str> = old.iter().map(|&p| self.id(p)).collect();
        let mut new_index = vec![usize::MAX; self.len()];
        for (i, &p) in old.iter().enumerate() {
            new_index[p] = i;
        }
        let closures = old
            .iter()
            .map(|&p| (self.closures[p] & keep).iter().map(|q| new_index[q]).collect())
            .collect();
        SpecSpace::from_closures(name, &ids, closures).expect("induced order is a partial order")
    }

    /// A copy where the point at index `i` moves to index `perm[i]`, keeping ids.
    pub fn permuted(&self, name: impl Into<String>, perm: &[usize]) -> SpecSpace {
        let n = self.len();
        let mut ids = vec![String::new(); n];
        let mut closures = vec![Bits::EMPTY; n];
        for p in 0..n {
            ids[perm[p]] = self.points[p].id.clone();
            closures[perm[p]] = Self::map_subset(perm, self.closures[p]);
        }
        SpecSpace::from_closures(name, &ids, closures).expect("permutation preserves order")
    }

    /// Covering pairs `(p, q)`: `q` specializes `p` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for p in 0..self.len() {
            let strict = self.closures[p] - Bits::singleton(p);
            for q in strict.iter() {
                let between = strict.iter().any(|r| r != q && self.closures[r].contains(q));
                if !between {
                    out.push((p, q));
                }
            }
        }
        out
    }

    /// Serialization in the space file format.
    pub fn to_text(&self) -> String {
        let mut s = format!("space {}\n", self.name);
        for p in &self.points {
            s.push_str(&format!("point {}\n", p.id));
        }
        for (p, q) in self.covers() {
            s.push_str(&format!("spec {} -> {}\n", self.id(p), self.id(q)));
        }
        s
    }

    pub fn format_subset(&self, s: Bits) -> String {
        let ids: Vec<&str> = s.iter().map(|p| self.id(p)).collect();
        format!("{{{}}}", ids.join(", "))
    }

    /// Parses the space file format:
    ///
    /// ```text
    /// space chain
    /// point p0
    /// point p1
    /// spec p0 -> p1
    /// ```
    pub fn parse(src: &str) -> Result<SpecSpace> {
        let lines = text::lines(src);
        let mut name: Option<String> = None;
        let mut ids: Vec<String> = Vec::new();
        let mut seen: HashMap<String, usize> = HashMap::new();
        let mut specs = Vec::new();
        for line in &lines {
            let words = line.words();
            match words[0].1 {
                "space" if words.len() == 2 => {
                    if name.is_some() {
                        return Err(line.error(0, "second `space` header").into());
                    }
                    name = Some(words[1].1.to_string());
                }
                "point" if words.len() == 2 => {
                    let id = words[1].1.to_string();
                    if seen.insert(id.clone(), ids.len()).is_some() {
                        return Err(line.error(words[1].0, format!("duplicate point `{id}`")).into());
                    }
                    ids.push(id);
                }
                "spec" if words.len() == 4 && words[2].1 == "->" => {
                    specs.push((line.clone(), words[1], words[3]));
                }
                _ => return Err(line.error(0, format!("unrecognized line `{}`", line.text)).into()),
            }
        }
        let name = name.ok_or_else(|| ParseError::new(1, 1, "missing `space <name>` header"))?;
        let mut covers = Vec::new();
        for (line, (po, p), (qo, q)) in specs {
            let pi = *seen
                .get(p)
                .ok_or_else(|| line.error(po, format!("dangling reference to point `{p}`")))?;
            let qi = *seen
                .get(q)
                .ok_or_else(|| line.error(qo, format!("dangling reference to point `{q}`")))?;
            covers.push((pi, qi));
        }
        SpecSpace::from_covers(name, &ids, &covers)
    }
}

/// Is `map` bijective onto `0..n`?
fn is_bijection(map: &[usize], n: usize) -> bool {
    if map.len() != n {
        return false;
    }
    let mut hit = vec![false; n];
    for &m in map {
        if m >= n || hit[m] {
            return false;
        }
        hit[m] = true;
    }
    true
}

/// Resolves a point map given by ids into indices.
pub fn resolve_point_map(a: &SpecSpace, b: &SpecSpace, map: &[(String, String)]) -> Result<Vec<usize>> {
    let mut out = vec![usize::MAX; a.len()];
    for (from, to) in map {
        out[a.index_of(from)?] = b.index_of(to)?;
    }
    if let Some(p) = out.iter().position(|&m| m == usize::MAX) {
        return Err(SpaceError::NotTotal(a.id(p).to_string()));
    }
    Ok(out)
}

/// Checks that `phi` (by indices) is a homeomorphism: a bijection carrying
/// closed sets to closed sets in both directions.
pub fn check_homeomorphism(a: &SpecSpace, b: &SpecSpace, phi: &[usize]) -> Result<bool> {
    if phi.len() != a.len() || phi.iter().any(|&m| m >= b.len()) {
        let missing = (0..a.len()).find(|&p| phi.get(p).is_none_or(|&m| m >= b.len()));
        return Err(SpaceError::NotTotal(a.id(missing.unwrap_or(0)).to_string()));
    }
    if a.len() != b.len() || !is_bijection(phi, b.len()) {
        return Ok(false);
    }
    let mut inverse = vec![0; b.len()];
    for (p, &q) in phi.iter().enumerate() {
        inverse[q] = p;
    }
    let forward = a.closed_sets().into_iter().all(|z| b.is_closed(SpecSpace::map_subset(phi, z)));
    let backward =
        b.closed_sets().into_iter().all(|z| a.is_closed(SpecSpace::map_subset(&inverse, z)));
    Ok(forward && backward)
}

/// Independent check: `phi` is an isomorphism of specialization posets.
pub fn is_order_isomorphism(a: &SpecSpace, b: &SpecSpace, phi: &[usize]) -> bool {
    if a.len() != b.len() || !is_bijection(phi, b.len()) {
        return false;
    }
    (0..a.len()).all(|p| {
        (0..a.len()).all(|q| a.specializes(q, p) == b.specializes(phi[q], phi[p]))
    })
}

/// All partial orders on `n` points up to isomorphism, each presented on
/// points `p0 .. p{n-1}` with a linear extension as index order.
pub fn enumerate_posets(n: usize) -> Vec<SpecSpace> {
    assert!(n <= 6, "poset enumeration is brute force");
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let perms = permutations(n);
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        // strict relation i < j only for i < j index-wise; closure[i] holds j
        let mut up = vec![0u64; n];
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                up[i] |= 1 << j;
            }
        }
        let transitive = (0..n).all(|i| {
            (0..n).filter(|&j| up[i] >> j & 1 == 1).all(|j| up[j] & !up[i] == 0)
        });
        if !transitive {
            continue;
        }
        let key = perms
            .iter()
            .map(|perm| {
                let mut code = 0u64;
                for i in 0..n {
                    for j in 0..n {
                        if up[i] >> j & 1 == 1 {
                            code |= 1 << (perm[i] * n + perm[j]);
                        }
                    }
                }
                code
            })
            .min()
            .unwrap_or(0);
        if !seen.insert(key) {
            continue;
        }
        let ids: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
        let closures = (0..n).map(|i| Bits(up[i] as u128) | Bits::singleton(i)).collect();
        let name = format!("poset{n}_{}", out.len());
        out.push(SpecSpace::from_closures(name, &ids, closures).expect("valid poset"));
    }
    out
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fan() -> SpecSpace {
        SpecSpace::from_covers("fan", &["g", "m1", "m2"], &[(0, 1), (0, 2)]).unwrap()
    }

    #[test]
    fn closures_of_small_spaces() {
        let chain = SpecSpace::chain("c", &["p0", "p1"]);
        assert_eq!(chain.closure("p0").unwrap().bits(), Bits::from_indices([0, 1]));
        let anti = SpecSpace::antichain("a", &["a", "b"]);
        assert_eq!(anti.closure("a").unwrap().bits(), Bits::singleton(0));
        assert_eq!(fan().closure("g").unwrap().bits(), Bits::full(3));
        assert!(matches!(chain.closure("zz"), Err(SpaceError::UnknownPoint(_))));
    }

    #[test]
    fn specialization_closed_examples() {
        let chain = SpecSpace::chain("c", &["p0", "p1"]);
        assert!(chain.is_specialization_closed(Bits::singleton(1)));
        assert!(!chain.is_specialization_closed(Bits::singleton(0)));
        assert!(chain.is_specialization_closed(Bits::EMPTY));
    }

    #[test]
    fn components() {
        let f = fan();
        assert_eq!(f.irreducible_components(Bits::full(3)).unwrap(), vec![ClosedSet(Bits::full(3))]);
        let anti = SpecSpace::antichain("a", &["a", "b"]);
        assert_eq!(
            anti.irreducible_components(Bits::full(2)).unwrap(),
            vec![ClosedSet(Bits::singleton(0)), ClosedSet(Bits::singleton(1))]
        );
        // V shape: m specializes both g1 and g2
        let v = SpecSpace::from_covers("v", &["g1", "g2", "m"], &[(0, 2), (1, 2)]).unwrap();
        assert_eq!(
            v.irreducible_components(Bits::full(3)).unwrap(),
            vec![ClosedSet(Bits::from_indices([0, 2])), ClosedSet(Bits::from_indices([1, 2]))]
        );
        assert!(matches!(v.irreducible_components(Bits::singleton(0)), Err(SpaceError::NotClosed(_))));
    }

    #[test]
    fn generic_points() {
        let chain = SpecSpace::chain("c", &["p0", "p1"]);
        assert_eq!(chain.generic_point(Bits::full(2)).unwrap().id, "p0");
        assert_eq!(chain.generic_point(Bits::singleton(1)).unwrap().id, "p1");
        let anti = SpecSpace::antichain("a", &["a", "b"]);
        assert!(matches!(anti.generic_point(Bits::full(2)), Err(SpaceError::NotIrreducible(_))));
    }

    #[test]
    fn families_of_small_spaces() {
        let one = SpecSpace::antichain("one", &["p"]);
        let fam = one.enumerate_families();
        assert_eq!(fam.closed.members, vec![Bits::EMPTY, Bits::singleton(0)]);
        assert_eq!(fam.irreducible.members, vec![Bits::singleton(0)]);
        let chain = SpecSpace::chain("c", &["p0", "p1"]);
        assert_eq!(
            chain.enumerate_families().closed.members,
            vec![Bits::EMPTY, Bits::singleton(1), Bits::full(2)]
        );
        let anti = SpecSpace::antichain("a", &["a", "b"]);
        assert_eq!(anti.enumerate_families().closed.members.len(), 4);
    }

    #[test]
    fn homeomorphisms() {
        let f = fan();
        assert!(check_homeomorphism(&f, &f, &[0, 1, 2]).unwrap());
        assert!(check_homeomorphism(&f, &f, &[0, 2, 1]).unwrap());
        assert!(!check_homeomorphism(&f, &f, &[1, 0, 2]).unwrap());
        let chain = SpecSpace::chain("c", &["p0", "p1"]);
        let anti = SpecSpace::antichain("a", &["a", "b"]);
        assert!(!check_homeomorphism(&chain, &anti, &[0, 1]).unwrap());
        assert!(!check_homeomorphism(&chain, &anti, &[1, 0]).unwrap());
        assert!(matches!(check_homeomorphism(&chain, &anti, &[0]), Err(SpaceError::NotTotal(_))));
    }

    #[test]
    fn parse_and_round_trip() {
        let src = "space fan\npoint g\npoint m1\npoint m2\nspec g -> m1\nspec g -> m2\n";
        let s = SpecSpace::parse(src).unwrap();
        assert_eq!(s, fan().permuted("fan", &[0, 1, 2]));
        assert_eq!(SpecSpace::parse(&s.to_text()).unwrap(), s);
    }

    #[test]
    fn parse_errors() {
        let cyc = "space c\npoint p\npoint q\nspec p -> q\nspec q -> p\n";
        assert!(matches!(SpecSpace::parse(cyc), Err(SpaceError::Cycle(_))));
        let dangling = "space c\npoint p\nspec p -> r\n";
        match SpecSpace::parse(dangling) {
            Err(SpaceError::Parse(e)) => assert_eq!((e.line, e.col), (3, 11)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn poset_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| enumerate_posets(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 5, 16, 63]);
    }
}
