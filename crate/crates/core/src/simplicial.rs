//! Abstract simplicial complexes on an ordered vertex set.
//!
//! Complexes are stored by their maximal simplices only, each encoded as a
//! bitmask over the vertices. Vertex labels are 1-based in the public API
//! and never permuted behind the caller's back: characteristic-matrix
//! columns are keyed to this order.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported vertex count (facets are `u64` bitmasks).
pub const MAX_VERTICES: usize = 64;

/// Bitmask over vertices; bit `v - 1` is vertex `v`.
pub(crate) type Mask = u64;

pub(crate) fn mask_of(vertices: &[usize]) -> Mask {
    vertices.iter().fold(0, |acc, &v| acc | 1 << (v - 1))
}

pub(crate) fn vertices_of(mask: Mask) -> Vec<usize> {
    (0..MAX_VERTICES)
        .filter(|b| mask >> b & 1 == 1)
        .map(|b| b + 1)
        .collect()
}

fn lex_key(mask: &Mask) -> Vec<usize> {
    vertices_of(*mask)
}

/// A facet-listed simplicial complex on vertices `1..=m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimplicialComplex {
    vertex_count: usize,
    // sorted lexicographically by vertex list
    facets: Vec<Mask>,
}

impl SimplicialComplex {
    /// Builds a complex from its maximal simplices.
    ///
    /// Rejects labels outside `1..=m`, empty facets, facets contained in other
    /// facets (duplicates included) and vertices that lie in no facet.
    pub fn new(vertex_count: usize, facets: Vec<Vec<usize>>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::MalformedComplex("at least one vertex is required".into()));
        }
        if vertex_count > MAX_VERTICES {
            return Err(Error::MalformedComplex(format!(
                "{vertex_count} vertices exceeds the supported maximum of {MAX_VERTICES}"
            )));
        }
        let mut masks = Vec::with_capacity(facets.len());
        for facet in &facets {
            if facet.is_empty() {
                return Err(Error::MalformedComplex("empty facet".into()));
            }
            if let Some(&v) = facet.iter().find(|&&v| v == 0 || v > vertex_count) {
                return Err(Error::MalformedComplex(format!(
                    "vertex label {v} outside 1..={vertex_count}"
                )));
            }
            let mask = mask_of(facet);
            if mask.count_ones() as usize != facet.len() {
                return Err(Error::MalformedComplex(format!("repeated vertex in facet {facet:?}")));
            }
            masks.push(mask);
        }
        for (i, &a) in masks.iter().enumerate() {
            for (j, &b) in masks.iter().enumerate() {
                if i != j && a & b == a {
                    return Err(Error::MalformedComplex(format!(
                        "facet {:?} is contained in facet {:?}",
                        vertices_of(a),
                        vertices_of(b)
                    )));
                }
            }
        }
        let covered = masks.iter().fold(0, |acc, m| acc | m);
        let all = full_mask(vertex_count);
        if covered != all {
            return Err(Error::MalformedComplex(format!(
                "vertices {:?} lie in no facet",
                vertices_of(all & !covered)
            )));
        }
        masks.sort_by_key(lex_key);
        Ok(SimplicialComplex { vertex_count, facets: masks })
    }

    /// Keeps only the inclusion-maximal sets. Caller guarantees coverage.
    fn from_maximal_of(vertex_count: usize, sets: impl IntoIterator<Item = Mask>) -> Self {
        let mut sets: Vec<Mask> = sets.into_iter().collect::<HashSet<_>>().into_iter().collect();
        sets.sort_by_key(|s| std::cmp::Reverse(s.count_ones()));
        let mut maximal: Vec<Mask> = Vec::new();
        for s in sets {
            if !maximal.iter().any(|&f| s & f == s) {
                maximal.push(s);
            }
        }
        maximal.sort_by_key(lex_key);
        SimplicialComplex { vertex_count, facets: maximal }
    }

    /// Boundary of the simplex on `d + 1` vertices.
    pub fn simplex_boundary(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimensions("simplex dimension must be at least 1".into()));
        }
        let m = dim + 1;
        let all = full_mask(m);
        Ok(Self::from_maximal_of(m, (0..m).map(|b| all & !(1 << b))))
    }

    /// Join of two complexes; the vertices of `other` are shifted past `self`.
    pub fn join(&self, other: &SimplicialComplex) -> Result<Self> {
        let m = self.vertex_count + other.vertex_count;
        if m > MAX_VERTICES {
            return Err(Error::MalformedComplex(format!(
                "join has {m} vertices, more than {MAX_VERTICES}"
            )));
        }
        let shift = self.vertex_count;
        let facets = self
            .facets
            .iter()
            .flat_map(|&a| other.facets.iter().map(move |&b| a | b << shift));
        Ok(Self::from_maximal_of(m, facets))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Facets as sorted 1-based vertex lists, in lexicographic order.
    pub fn facets(&self) -> Vec<Vec<usize>> {
        self.facets.iter().map(|&f| vertices_of(f)).collect()
    }

    /// Dimension plus one of the largest facet.
    pub fn max_facet_size(&self) -> usize {
        self.facets.iter().map(|f| f.count_ones() as usize).max().unwrap_or(0)
    }

    /// True when every facet has the same cardinality.
    pub fn is_pure(&self) -> bool {
        let size = self.max_facet_size();
        self.facets.iter().all(|f| f.count_ones() as usize == size)
    }

    pub(crate) fn contains_mask(&self, set: Mask) -> bool {
        self.facets.iter().any(|&f| set & f == set)
    }

    /// Whether the given vertex set is a simplex of the complex.
    pub fn is_face(&self, vertices: &[usize]) -> bool {
        vertices.iter().all(|&v| v >= 1 && v <= self.vertex_count)
            && self.contains_mask(mask_of(vertices))
    }

    /// Whether `perm` (with `perm[v - 1]` the image of vertex `v`) maps the
    /// facet set onto itself.
    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        if !is_permutation(perm, self.vertex_count) {
            return false;
        }
        let image: HashSet<Mask> = self
            .facets
            .iter()
            .map(|&f| vertices_of(f).iter().fold(0, |acc, &v| acc | 1 << (perm[v - 1] - 1)))
            .collect();
        image.len() == self.facets.len() && self.facets.iter().all(|f| image.contains(f))
    }

    /// The complex with vertex `v` renamed to `perm[v - 1]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if !is_permutation(perm, self.vertex_count) {
            return Err(Error::MalformedComplex(format!("{perm:?} is not a permutation")));
        }
        let facets = self
            .facets
            .iter()
            .map(|&f| vertices_of(f).iter().fold(0, |acc, &v| acc | 1 << (perm[v - 1] - 1)));
        Ok(Self::from_maximal_of(self.vertex_count, facets))
    }
}

pub(crate) fn full_mask(m: usize) -> Mask {
    if m == 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

pub(crate) fn is_permutation(perm: &[usize], m: usize) -> bool {
    if perm.len() != m {
        return false;
    }
    let mut seen = vec![false; m];
    for &p in perm {
        if p == 0 || p > m || seen[p - 1] {
            return false;
        }
        seen[p - 1] = true;
    }
    true
}

impl fmt::Display for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let facets: Vec<String> = self
            .facets()
            .iter()
            .map(|s| format!("{{{}}}", s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "K[{}]({})", self.vertex_count, facets.join(" "))
    }
}

/// K(Δ^{d₁} × … × Δ^{d_r}) = ∂Δ^{d₁} ⋆ … ⋆ ∂Δ^{d_r}.
///
/// Vertices are grouped factor-major: the first `d₁ + 1` vertices belong to
/// the first factor, and so on.
pub fn build_dual_of_simplex_product(factor_dims: &[usize]) -> Result<SimplicialComplex> {
    let (first, rest) = factor_dims
        .split_first()
        .ok_or_else(|| Error::InvalidDimensions("at least one factor is required".into()))?;
    let mut k = SimplicialComplex::simplex_boundary(*first)?;
    for &d in rest {
        k = k.join(&SimplicialComplex::simplex_boundary(d)?)?;
    }
    Ok(k)
}

/// Minimal nonfaces of a complex along with summary data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonfaceReport {
    pub minimal_nonfaces: Vec<Vec<usize>>,
    pub cardinalities: Vec<usize>,
    pub pairwise_disjoint: bool,
}

/// All inclusion-minimal nonfaces, lexicographically ordered.
///
/// Candidates of size `s` are built from faces of size `s - 1`; a candidate
/// all of whose codimension-one subsets are faces is either a face (kept for
/// the next level) or a minimal nonface.
pub fn minimal_nonfaces(k: &SimplicialComplex) -> NonfaceReport {
    let nonfaces = minimal_nonface_masks(k);
    let pairwise_disjoint = nonfaces
        .iter()
        .enumerate()
        .all(|(i, a)| nonfaces[i + 1..].iter().all(|b| a & b == 0));
    NonfaceReport {
        cardinalities: nonfaces.iter().map(|s| s.count_ones() as usize).collect(),
        minimal_nonfaces: nonfaces.iter().map(|&s| vertices_of(s)).collect(),
        pairwise_disjoint,
    }
}

pub(crate) fn minimal_nonface_masks(k: &SimplicialComplex) -> Vec<Mask> {
    let m = k.vertex_count;
    let mut level: Vec<Mask> = (0..m).map(|b| 1 << b).collect();
    let mut found = Vec::new();
    while !level.is_empty() {
        let faces: HashSet<Mask> = level.iter().copied().collect();
        let mut next = Vec::new();
        for &face in &level {
            let top = 63 - face.leading_zeros() as usize;
            for v in top + 1..m {
                let cand = face | 1 << v;
                let boundary_ok = (0..m)
                    .filter(|b| cand >> b & 1 == 1)
                    .all(|b| faces.contains(&(cand & !(1 << b))));
                if !boundary_ok {
                    continue;
                }
                if k.contains_mask(cand) {
                    next.push(cand);
                } else {
                    found.push(cand);
                }
            }
        }
        level = next;
    }
    found.sort_by_key(lex_key);
    found
}

/// Full subcomplex `K_I`, relabeled onto `1..=|I|` in increasing order.
///
/// Returns the complex together with the map from new labels to old ones
/// (`map[i - 1]` is the original label of new vertex `i`).
pub fn full_subcomplex(
    k: &SimplicialComplex,
    subset: &[usize],
) -> Result<(SimplicialComplex, Vec<usize>)> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    if let Some(&v) = subset.iter().find(|&&v| v == 0 || v > k.vertex_count) {
        return Err(Error::MalformedComplex(format!("vertex {v} not in complex")));
    }
    let mut map = subset.to_vec();
    map.sort_unstable();
    map.dedup();
    let restrict = mask_of(&map);
    let relabel = |s: Mask| -> Mask {
        map.iter()
            .enumerate()
            .filter(|(_, &old)| s >> (old - 1) & 1 == 1)
            .fold(0, |acc, (new, _)| acc | 1 << new)
    };
    let sets = k
        .facets
        .iter()
        .map(|&f| f & restrict)
        .filter(|&s| s != 0)
        .map(relabel);
    Ok((SimplicialComplex::from_maximal_of(map.len(), sets), map))
}

/// Why a complex fails to be a join of boundaries of tetrahedra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JoinObstruction {
    NonfaceCardinality { nonface: Vec<usize>, cardinality: usize },
    IntersectingNonfaces { first: Vec<usize>, second: Vec<usize> },
    UncoveredVertices { vertices: Vec<usize> },
    FacetsDiffer,
}

impl fmt::Display for JoinObstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JoinObstruction::NonfaceCardinality { nonface, cardinality } => {
                write!(f, "nonface cardinality {cardinality} ({nonface:?})")
            }
            JoinObstruction::IntersectingNonfaces { first, second } => {
                write!(f, "intersecting nonfaces {first:?} and {second:?}")
            }
            JoinObstruction::UncoveredVertices { vertices } => {
                write!(f, "vertices {vertices:?} lie in no minimal nonface")
            }
            JoinObstruction::FacetsDiffer => {
                write!(f, "facets differ from the join of the nonface boundaries")
            }
        }
    }
}

impl std::error::Error for JoinObstruction {}

/// Vertex blocks of ∂Δ³ ⋆ … ⋆ ∂Δ³, each sorted, blocks ordered by least vertex.
pub type TetraBlocks = Vec<[usize; 4]>;

/// Recognizes `∂Δ³ ⋆ … ⋆ ∂Δ³` and returns its vertex blocks.
///
/// Conditions are checked in order: every minimal nonface has cardinality 4,
/// the nonfaces are pairwise disjoint, they cover every vertex, and the
/// facets are exactly those of the join.
pub fn is_join_of_tetrahedron_boundaries(
    k: &SimplicialComplex,
) -> std::result::Result<TetraBlocks, JoinObstruction> {
    let nonfaces = minimal_nonface_masks(k);
    if let Some(&bad) = nonfaces.iter().find(|s| s.count_ones() != 4) {
        return Err(JoinObstruction::NonfaceCardinality {
            nonface: vertices_of(bad),
            cardinality: bad.count_ones() as usize,
        });
    }
    for (i, &a) in nonfaces.iter().enumerate() {
        if let Some(&b) = nonfaces[i + 1..].iter().find(|&&b| a & b != 0) {
            return Err(JoinObstruction::IntersectingNonfaces {
                first: vertices_of(a),
                second: vertices_of(b),
            });
        }
    }
    let covered = nonfaces.iter().fold(0, |acc, s| acc | s);
    let all = full_mask(k.vertex_count);
    if covered != all {
        return Err(JoinObstruction::UncoveredVertices { vertices: vertices_of(all & !covered) });
    }
    let mut blocks: TetraBlocks = nonfaces
        .iter()
        .map(|&s| {
            let v = vertices_of(s);
            [v[0], v[1], v[2], v[3]]
        })
        .collect();
    blocks.sort();
    // facets of the join: omit exactly one vertex from each block
    let mut expected: Vec<Mask> = vec![all];
    for block in &blocks {
        expected = expected
            .iter()
            .flat_map(|&f| block.iter().map(move |&v| f & !(1 << (v - 1))))
            .collect();
    }
    let expected: HashSet<Mask> = expected.into_iter().collect();
    let actual: HashSet<Mask> = k.facets.iter().copied().collect();
    if expected != actual {
        return Err(JoinObstruction::FacetsDiffer);
    }
    Ok(blocks)
}

/// JSON form `{"vertices": m, "facets": [[1,2,3], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexJson {
    pub vertices: usize,
    pub facets: Vec<Vec<usize>>,
}

impl From<&SimplicialComplex> for ComplexJson {
    fn from(k: &SimplicialComplex) -> Self {
        ComplexJson { vertices: k.vertex_count, facets: k.facets() }
    }
}

impl TryFrom<ComplexJson> for SimplicialComplex {
    type Error = Error;

    fn try_from(j: ComplexJson) -> Result<Self> {
        SimplicialComplex::new(j.vertices, j.facets)
    }
}

impl Serialize for SimplicialComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for SimplicialComplex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = ComplexJson::deserialize(d)?;
        SimplicialComplex::try_from(j).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn four_cycle() -> SimplicialComplex {
        build_dual_of_simplex_product(&[1, 1]).unwrap()
    }

    #[test]
    fn tetrahedron_boundary() {
        let k = build_dual_of_simplex_product(&[3]).unwrap();
        assert_eq!(k.vertex_count(), 4);
        assert_eq!(k.facets(), vec![vec![1, 2, 3], vec![1, 2, 4], vec![1, 3, 4], vec![2, 3, 4]]);
    }

    #[test]
    fn join_of_two_tetrahedra() {
        let k = build_dual_of_simplex_product(&[3, 3]).unwrap();
        assert_eq!(k.vertex_count(), 8);
        assert_eq!(k.facets().len(), 16);
        for f in k.facets() {
            assert_eq!(f.iter().filter(|&&v| v <= 4).count(), 3);
            assert_eq!(f.iter().filter(|&&v| v > 4).count(), 3);
        }
    }

    #[test]
    fn square_is_four_cycle() {
        let k = four_cycle();
        assert_eq!(k.facets(), vec![vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4]]);
    }

    #[test]
    fn rejects_bad_dimensions() {
        assert!(build_dual_of_simplex_product(&[]).is_err());
        assert!(build_dual_of_simplex_product(&[3, 0]).is_err());
    }

    #[test]
    fn rejects_malformed() {
        assert!(SimplicialComplex::new(0, vec![]).is_err());
        assert!(SimplicialComplex::new(3, vec![vec![1, 2]]).is_err()); // ghost vertex 3
        assert!(SimplicialComplex::new(3, vec![vec![1, 2, 3], vec![1, 2]]).is_err());
        assert!(SimplicialComplex::new(3, vec![vec![1, 2, 3], vec![1, 2, 3]]).is_err());
        assert!(SimplicialComplex::new(2, vec![vec![]]).is_err());
        assert!(SimplicialComplex::new(2, vec![vec![1, 3]]).is_err());
    }

    #[test]
    fn nonfaces_of_examples() {
        let r = minimal_nonfaces(&build_dual_of_simplex_product(&[3]).unwrap());
        assert_eq!(r.minimal_nonfaces, vec![vec![1, 2, 3, 4]]);
        assert!(r.pairwise_disjoint);

        let r = minimal_nonfaces(&build_dual_of_simplex_product(&[3, 3]).unwrap());
        assert_eq!(r.minimal_nonfaces, vec![vec![1, 2, 3, 4], vec![5, 6, 7, 8]]);
        assert_eq!(r.cardinalities, vec![4, 4]);
        assert!(r.pairwise_disjoint);

        let r = minimal_nonfaces(&four_cycle());
        assert_eq!(r.minimal_nonfaces, vec![vec![1, 2], vec![3, 4]]);
        assert!(r.pairwise_disjoint);
    }

    #[test]
    fn intersecting_nonfaces_detected() {
        // every diagonal of the pentagon is a minimal nonface
        let pentagon = SimplicialComplex::new(
            5,
            vec![vec![1, 2], vec![2, 3], vec![3, 4], vec![4, 5], vec![1, 5]],
        )
        .unwrap();
        let r = minimal_nonfaces(&pentagon);
        assert_eq!(r.minimal_nonfaces.len(), 5);
        assert!(!r.pairwise_disjoint);
    }

    #[test]
    fn full_subcomplex_examples() {
        let k = build_dual_of_simplex_product(&[3, 3]).unwrap();
        let (sub, map) = full_subcomplex(&k, &[1, 2, 3, 4]).unwrap();
        assert_eq!(sub, build_dual_of_simplex_product(&[3]).unwrap());
        assert_eq!(map, vec![1, 2, 3, 4]);

        let tet = build_dual_of_simplex_product(&[3]).unwrap();
        let (sub, _) = full_subcomplex(&tet, &[1, 2]).unwrap();
        assert_eq!(sub.facets(), vec![vec![1, 2]]);

        // {1,2} is a nonface of ∂Δ¹ ⋆ ∂Δ¹, {1,3} an edge
        let (sub, map) = full_subcomplex(&four_cycle(), &[2, 1]).unwrap();
        assert_eq!(sub.facets(), vec![vec![1], vec![2]]);
        assert_eq!(map, vec![1, 2]);
        let (sub, map) = full_subcomplex(&four_cycle(), &[1, 3]).unwrap();
        assert_eq!(sub.facets(), vec![vec![1, 2]]);
        assert_eq!(map, vec![1, 3]);

        assert_eq!(full_subcomplex(&tet, &[]), Err(Error::EmptySubset));
    }

    #[test]
    fn tetra_join_recognition() {
        let k = build_dual_of_simplex_product(&[3, 3]).unwrap();
        assert_eq!(is_join_of_tetrahedron_boundaries(&k), Ok(vec![[1, 2, 3, 4], [5, 6, 7, 8]]));

        let k = build_dual_of_simplex_product(&[4]).unwrap();
        let err = is_join_of_tetrahedron_boundaries(&k).unwrap_err();
        assert!(err.to_string().starts_with("nonface cardinality 5"), "{err}");

        let err = is_join_of_tetrahedron_boundaries(&four_cycle()).unwrap_err();
        assert!(err.to_string().starts_with("nonface cardinality 2"), "{err}");
    }

    #[test]
    fn tetra_join_on_permuted_labels() {
        let k = build_dual_of_simplex_product(&[3, 3]).unwrap();
        let perm = [1, 5, 2, 6, 3, 7, 4, 8];
        let k = k.relabel(&perm).unwrap();
        assert_eq!(is_join_of_tetrahedron_boundaries(&k), Ok(vec![[1, 2, 5, 6], [3, 4, 7, 8]]));
    }

    #[test]
    fn tetrahedron_plus_cone_is_uncovered() {
        // ∂Δ³ ⋆ Δ⁰: the cone vertex 5 lies in no nonface
        let k = build_dual_of_simplex_product(&[3]).unwrap();
        let point = SimplicialComplex::new(1, vec![vec![1]]).unwrap();
        let cone = k.join(&point).unwrap();
        assert_eq!(
            is_join_of_tetrahedron_boundaries(&cone),
            Err(JoinObstruction::UncoveredVertices { vertices: vec![5] })
        );
    }

    #[test]
    fn automorphisms() {
        let tet = build_dual_of_simplex_product(&[3]).unwrap();
        assert!(tet.is_automorphism(&[2, 1, 3, 4]));
        let k = build_dual_of_simplex_product(&[3, 3]).unwrap();
        assert!(k.is_automorphism(&[5, 6, 7, 8, 1, 2, 3, 4]));
        assert!(!k.is_automorphism(&[1, 2, 3, 5, 4, 6, 7, 8]));
        assert!(!k.is_automorphism(&[1, 1, 3, 4, 5, 6, 7, 8]));
    }

    #[test]
    fn json_round_trip() {
        let k = build_dual_of_simplex_product(&[1, 3]).unwrap();
        let s = serde_json::to_string(&k).unwrap();
        let back: SimplicialComplex = serde_json::from_str(&s).unwrap();
        assert_eq!(back, k);
        assert!(serde_json::from_str::<SimplicialComplex>(r#"{"vertices":2,"facets":[[1]]}"#).is_err());
    }
}
