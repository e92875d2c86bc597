//! Characteristic matrices over simple polytopes, equivalence moves, and
//! the reduction to standard form over products of 3-simplices.
//!
//! Columns are indexed by the vertices of the dual complex `K(P)` (facets of
//! `P`). For `(Δ³)ⁿ` the facet order is factor-major:
//! `F₁₁, F₁₂, F₁₃, F₁₄, F₂₁, …, Fₙ₄`, i.e. column `4(i-1) + j` is `F_ij`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intmat::{IntMatrix, JsonInt};
use crate::simplicial::{
    build_dual_of_simplex_product, is_join_of_tetrahedron_boundaries, ComplexJson,
    SimplicialComplex,
};

/// Where the columns of a characteristic matrix live.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Polytope {
    /// Δ^{d₁} × … × Δ^{d_r}.
    SimplexProduct { factors: Vec<usize> },
    /// An explicitly given dual complex K(P).
    Complex {
        vertices: usize,
        facets: Vec<Vec<usize>>,
    },
}

impl Polytope {
    pub fn cube_of_tetrahedra(n: usize) -> Self {
        Polytope::SimplexProduct { factors: vec![3; n] }
    }

    pub fn dual_complex(&self) -> Result<SimplicialComplex> {
        match self {
            Polytope::SimplexProduct { factors } => build_dual_of_simplex_product(factors),
            Polytope::Complex { vertices, facets } => {
                SimplicialComplex::new(*vertices, facets.clone())
            }
        }
    }

    pub fn from_complex(k: &SimplicialComplex) -> Self {
        let ComplexJson { vertices, facets } = ComplexJson::from(k);
        Polytope::Complex { vertices, facets }
    }
}

/// An integer matrix together with the complex whose vertices index its
/// columns. Construction checks shapes only; use [`CharacteristicMatrix::validate`]
/// for the unimodularity condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacteristicMatrix {
    entries: IntMatrix,
    polytope: Polytope,
    context: SimplicialComplex,
}

/// Determinant of the columns indexed by one maximal simplex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplexDet {
    pub simplex: Vec<usize>,
    pub det: JsonInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validity {
    /// All maximal-simplex determinants, in lexicographic simplex order.
    Valid(Vec<SimplexDet>),
    /// The first simplex whose determinant is not ±1.
    Invalid(SimplexDet),
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid(_))
    }
}

impl CharacteristicMatrix {
    pub fn new(entries: IntMatrix, polytope: Polytope) -> Result<Self> {
        let context = polytope.dual_complex()?;
        Self::with_context(entries, polytope, context)
    }

    fn with_context(entries: IntMatrix, polytope: Polytope, context: SimplicialComplex) -> Result<Self> {
        if entries.cols() != context.vertex_count() {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} columns but the complex has {} vertices",
                entries.cols(),
                context.vertex_count()
            )));
        }
        if !context.is_pure() || context.max_facet_size() != entries.rows() {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} rows but the complex is not pure of facet size {}",
                entries.rows(),
                entries.rows()
            )));
        }
        Ok(CharacteristicMatrix { entries, polytope, context })
    }

    pub fn entries(&self) -> &IntMatrix {
        &self.entries
    }

    pub fn context(&self) -> &SimplicialComplex {
        &self.context
    }

    pub fn polytope(&self) -> &Polytope {
        &self.polytope
    }

    /// Rank `n` (number of rows).
    pub fn rank(&self) -> usize {
        self.entries.rows()
    }

    /// Number of facets `m` (number of columns).
    pub fn facet_count(&self) -> usize {
        self.entries.cols()
    }

    /// Checks `det = ±1` on every maximal simplex.
    pub fn validate(&self) -> Validity {
        let mut cert = Vec::new();
        for simplex in self.context.facets() {
            let cols: Vec<usize> = simplex.iter().map(|v| v - 1).collect();
            let det = self
                .entries
                .select_columns(&cols)
                .determinant()
                .expect("pure complex gives square minors");
            let entry = SimplexDet { simplex, det: JsonInt(det) };
            if !entry.det.0.abs().is_one() {
                return Validity::Invalid(entry);
            }
            cert.push(entry);
        }
        Validity::Valid(cert)
    }

    /// Like [`validate`](Self::validate) but turns a failure into an error.
    pub fn certify(&self) -> Result<Vec<SimplexDet>> {
        match self.validate() {
            Validity::Valid(cert) => Ok(cert),
            Validity::Invalid(SimplexDet { simplex, det }) => {
                Err(Error::InvalidMatrix { simplex, determinant: det.0.to_string() })
            }
        }
    }

    /// The same matrix with columns renamed by a vertex relabeling of the
    /// context: column `v` moves to `perm[v - 1]`. The context is relabeled
    /// accordingly, so this is an isomorphism rather than an equivalence move.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let context = self.context.relabel(perm)?;
        let entries = permute_columns(&self.entries, perm);
        Self::with_context(entries, Polytope::from_complex(&context), context)
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            n: self.rank(),
            m: self.facet_count(),
            entries: self.entries.clone(),
            polytope: self.polytope.clone(),
        }
    }
}

fn permute_columns(a: &IntMatrix, perm: &[usize]) -> IntMatrix {
    let mut out = IntMatrix::zeros(a.rows(), a.cols());
    for (old, &new) in perm.iter().enumerate() {
        for i in 0..a.rows() {
            out[(i, new - 1)] = a[(i, old)].clone();
        }
    }
    out
}

/// JSON form `{"n": 3, "m": 4, "entries": [[...]], "polytope": {...}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub m: usize,
    pub entries: IntMatrix,
    pub polytope: Polytope,
}

impl TryFrom<MatrixJson> for CharacteristicMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        if j.entries.rows() != j.n || j.entries.cols() != j.m {
            return Err(Error::DimensionMismatch(format!(
                "declared {}x{} but entries are {}x{}",
                j.n,
                j.m,
                j.entries.rows(),
                j.entries.cols()
            )));
        }
        CharacteristicMatrix::new(j.entries, j.polytope)
    }
}

/// One generator of the equivalence `A = α·(QBD)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EquivalenceMove {
    /// `A ↦ Q·A` for unimodular `Q`.
    LeftGl { matrix: IntMatrix },
    /// `A ↦ A·D` for `D = diag(signs)`, `signs[j] = ±1`.
    ColumnSigns { signs: Vec<i8> },
    /// `A ↦ α·A`: column `v` moves to position `perm[v - 1]`; `perm` must be
    /// an automorphism of the context complex.
    FacetPermutation { perm: Vec<usize> },
}

/// Applies one equivalence move, checking well-formedness.
pub fn apply_move(a: &CharacteristicMatrix, mv: &EquivalenceMove) -> Result<CharacteristicMatrix> {
    let entries = match mv {
        EquivalenceMove::LeftGl { matrix } => {
            if matrix.rows() != a.rank() || matrix.cols() != a.rank() {
                return Err(Error::DimensionMismatch(format!(
                    "left factor must be {}x{}",
                    a.rank(),
                    a.rank()
                )));
            }
            let det = matrix.determinant()?;
            if !det.abs().is_one() {
                return Err(Error::NotUnimodular(det.to_string()));
            }
            matrix * &a.entries
        }
        EquivalenceMove::ColumnSigns { signs } => {
            if signs.len() != a.facet_count() {
                return Err(Error::DimensionMismatch(format!(
                    "{} column signs for {} columns",
                    signs.len(),
                    a.facet_count()
                )));
            }
            if let Some(s) = signs.iter().find(|s| s.abs() != 1) {
                return Err(Error::NotUnimodular(format!("column sign {s}")));
            }
            let mut e = a.entries.clone();
            for (j, _) in signs.iter().enumerate().filter(|(_, &s)| s < 0) {
                e.negate_column(j);
            }
            e
        }
        EquivalenceMove::FacetPermutation { perm } => {
            if !a.context.is_automorphism(perm) {
                return Err(Error::NotAnAutomorphism(format!("{perm:?}")));
            }
            permute_columns(&a.entries, perm)
        }
    };
    Ok(CharacteristicMatrix {
        entries,
        polytope: a.polytope.clone(),
        context: a.context.clone(),
    })
}

pub fn apply_moves(a: &CharacteristicMatrix, moves: &[EquivalenceMove]) -> Result<CharacteristicMatrix> {
    moves.iter().try_fold(a.clone(), |acc, mv| apply_move(&acc, mv))
}

/// Automorphism of `K((Δ³)ⁿ)`: factor `i` is sent to factor `factor_image[i]`
/// (0-based) after permuting its four facets by `local[i]` (0-based images).
pub fn tetra_product_automorphism(factor_image: &[usize], local: &[[usize; 4]]) -> Vec<usize> {
    let mut perm = vec![0; 4 * factor_image.len()];
    for (i, (&fi, lp)) in factor_image.iter().zip(local).enumerate() {
        for j in 0..4 {
            perm[4 * i + j] = 4 * fi + lp[j] + 1;
        }
    }
    perm
}

/// Integer 3-vector `a_ij`.
pub type Block = [BigInt; 3];

fn block_i64(b: [i64; 3]) -> Block {
    b.map(BigInt::from)
}

fn unit_block() -> Block {
    block_i64([1, 1, 1])
}

/// The block matrix shape
/// `(E₃ a_{11} | E₃ a_{12} | …)` row-block by row-block: row block `i` carries
/// the identity under `F_{i1}, F_{i2}, F_{i3}` and the vector `a_{ik}` under
/// every `F_{k4}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StandardForm {
    n: usize,
    // blocks[i][k] = a_{i+1,k+1}
    blocks: Vec<Vec<Block>>,
}

impl StandardForm {
    pub fn new(blocks: Vec<Vec<Block>>) -> Result<Self> {
        let n = blocks.len();
        if n == 0 || blocks.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("blocks must form a nonempty n x n array".into()));
        }
        Ok(StandardForm { n, blocks })
    }

    /// Normalized diagonal with the given off-diagonal blocks; `off(i, k)` is
    /// called for 0-based `i != k`.
    pub fn with_off_diagonal(n: usize, mut off: impl FnMut(usize, usize) -> [i64; 3]) -> Self {
        let blocks = (0..n)
            .map(|i| {
                (0..n)
                    .map(|k| if i == k { unit_block() } else { block_i64(off(i, k)) })
                    .collect()
            })
            .collect();
        StandardForm { n, blocks }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `a_{i+1,k+1}` for 0-based indices.
    pub fn block(&self, i: usize, k: usize) -> &Block {
        &self.blocks[i][k]
    }

    /// Every diagonal block equals ᵗ(1,1,1).
    pub fn is_normalized(&self) -> bool {
        (0..self.n).all(|i| self.blocks[i][i] == unit_block())
    }

    pub fn to_json(&self) -> StandardFormJson {
        let mut blocks = BTreeMap::new();
        for i in 0..self.n {
            for k in 0..self.n {
                blocks.insert(
                    format!("({},{})", i + 1, k + 1),
                    self.blocks[i][k].clone().map(JsonInt),
                );
            }
        }
        StandardFormJson { n: self.n, blocks }
    }
}

/// Reassembles the `3n × 4n` matrix over `(Δ³)ⁿ`.
pub fn assemble(sf: &StandardForm) -> CharacteristicMatrix {
    let n = sf.n;
    let mut e = IntMatrix::zeros(3 * n, 4 * n);
    for i in 0..n {
        for j in 0..3 {
            e[(3 * i + j, 4 * i + j)] = BigInt::one();
        }
        for k in 0..n {
            for j in 0..3 {
                e[(3 * i + j, 4 * k + 3)] = sf.blocks[i][k][j].clone();
            }
        }
    }
    CharacteristicMatrix::new(e, Polytope::cube_of_tetrahedra(n)).expect("shape matches (Δ³)ⁿ")
}

/// Reads the blocks of a matrix already in the assembled shape.
fn extract_standard_form(e: &IntMatrix, n: usize) -> Option<StandardForm> {
    for i in 0..n {
        for j in 0..3 {
            let col = e.column(4 * i + j);
            let unit = col.iter().enumerate().all(|(r, x)| {
                if r == 3 * i + j { x.is_one() } else { x.is_zero() }
            });
            if !unit {
                return None;
            }
        }
    }
    let blocks = (0..n)
        .map(|i| {
            (0..n)
                .map(|k| std::array::from_fn(|j| e[(3 * i + j, 4 * k + 3)].clone()))
                .collect()
        })
        .collect();
    Some(StandardForm { n, blocks })
}

/// Number of `∂Δ³` factors when the context is exactly `K((Δ³)ⁿ)` with the
/// factor-major vertex order.
pub fn tetra_factor_count(k: &SimplicialComplex) -> Result<usize> {
    let blocks = is_join_of_tetrahedron_boundaries(k).map_err(|o| Error::NotTetraJoin(o.to_string()))?;
    let contiguous = blocks
        .iter()
        .enumerate()
        .all(|(i, b)| *b == [4 * i + 1, 4 * i + 2, 4 * i + 3, 4 * i + 4]);
    if !contiguous {
        return Err(Error::NotTetraJoin(format!(
            "blocks {blocks:?} are not in factor-major order"
        )));
    }
    Ok(blocks.len())
}

/// Relabels a matrix whose context is a join of tetrahedron boundaries so
/// that the factors occupy contiguous, increasing vertex blocks. Returns the
/// relabeling (`perm[v - 1]` is the new label of `v`) unless it is the
/// identity.
pub fn to_factor_major(a: &CharacteristicMatrix) -> Result<(CharacteristicMatrix, Option<Vec<usize>>)> {
    let blocks = is_join_of_tetrahedron_boundaries(a.context()).map_err(|o| Error::NotTetraJoin(o.to_string()))?;
    let mut perm = vec![0; a.facet_count()];
    for (i, block) in blocks.iter().enumerate() {
        for (j, &v) in block.iter().enumerate() {
            perm[v - 1] = 4 * i + j + 1;
        }
    }
    if perm.iter().enumerate().all(|(i, &p)| p == i + 1) {
        return Ok((a.clone(), None));
    }
    let entries = permute_columns(&a.entries, &perm);
    let m = CharacteristicMatrix::new(entries, Polytope::cube_of_tetrahedra(blocks.len()))?;
    Ok((m, Some(perm)))
}

/// Brings a valid matrix over `(Δ³)ⁿ` to standard form.
///
/// Moves, in order: left multiplication by the inverse of the columns under
/// `F_{i1}, F_{i2}, F_{i3}`; then a row-sign matrix `R`; then column signs `D`.
/// For each `i`, `D` flips `F_{i4}` when `c_ii` has two or more negative
/// entries; each remaining negative entry `j` is fixed by flipping row
/// `3(i-1)+j` together with column `F_ij`, which restores the identity block.
/// Identity moves are omitted, so replaying the returned moves on `a` gives
/// `assemble(result)` exactly.
pub fn reduce_to_standard_form(a: &CharacteristicMatrix) -> Result<(StandardForm, Vec<EquivalenceMove>)> {
    let n = tetra_factor_count(a.context())?;
    a.certify()?;
    let mut moves = Vec::new();

    let vertex_cols: Vec<usize> = (0..n).flat_map(|i| (0..3).map(move |j| 4 * i + j)).collect();
    let q = a.entries.select_columns(&vertex_cols);
    let qinv = q.unimodular_inverse()?;
    let mut c = a.clone();
    if qinv != IntMatrix::identity(3 * n) {
        let mv = EquivalenceMove::LeftGl { matrix: qinv };
        c = apply_move(&c, &mv)?;
        moves.push(mv);
    }

    let mut row_signs = vec![1i64; 3 * n];
    let mut col_signs = vec![1i8; 4 * n];
    for i in 0..n {
        let diag: Vec<BigInt> = (0..3).map(|j| c.entries[(3 * i + j, 4 * i + 3)].clone()).collect();
        if diag.iter().any(|x| !x.abs().is_one()) {
            return Err(Error::CriterionDisagreement(format!(
                "diagonal block {i} is {diag:?} after reduction of a valid matrix"
            )));
        }
        let negatives = diag.iter().filter(|x| x.is_negative()).count();
        let flip_last = negatives >= 2;
        if flip_last {
            col_signs[4 * i + 3] = -1;
        }
        for (j, x) in diag.iter().enumerate() {
            if x.is_negative() != flip_last {
                row_signs[3 * i + j] = -1;
                col_signs[4 * i + j] = -1;
            }
        }
    }
    if row_signs.iter().any(|&s| s < 0) {
        let mv = EquivalenceMove::LeftGl { matrix: IntMatrix::diagonal(&row_signs) };
        c = apply_move(&c, &mv)?;
        moves.push(mv);
    }
    if col_signs.iter().any(|&s| s < 0) {
        let mv = EquivalenceMove::ColumnSigns { signs: col_signs };
        c = apply_move(&c, &mv)?;
        moves.push(mv);
    }

    let sf = extract_standard_form(&c.entries, n).ok_or_else(|| {
        Error::CriterionDisagreement("reduced matrix lost its identity blocks".into())
    })?;
    debug_assert!(sf.is_normalized());
    Ok((sf, moves))
}

/// JSON form `{"n": 2, "blocks": {"(i,j)": [x, y, z], ...}}`, 1-based keys.
/// Missing diagonal blocks default to ᵗ(1,1,1), missing off-diagonal ones to 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StandardFormJson {
    pub n: usize,
    pub blocks: BTreeMap<String, [JsonInt; 3]>,
}

fn parse_block_key(key: &str, n: usize) -> Result<(usize, usize)> {
    let bad = || Error::Parse(format!("bad block key {key:?}"));
    let inner = key.trim().strip_prefix('(').and_then(|s| s.strip_suffix(')')).ok_or_else(bad)?;
    let (i, k) = inner.split_once(',').ok_or_else(bad)?;
    let i: usize = i.trim().parse().map_err(|_| bad())?;
    let k: usize = k.trim().parse().map_err(|_| bad())?;
    if i == 0 || k == 0 || i > n || k > n {
        return Err(bad());
    }
    Ok((i - 1, k - 1))
}

impl TryFrom<StandardFormJson> for StandardForm {
    type Error = Error;

    fn try_from(j: StandardFormJson) -> Result<Self> {
        if j.n == 0 {
            return Err(Error::Parse("standard form needs n >= 1".into()));
        }
        let mut sf = StandardForm::with_off_diagonal(j.n, |_, _| [0, 0, 0]);
        for (key, value) in j.blocks {
            let (i, k) = parse_block_key(&key, j.n)?;
            sf.blocks[i][k] = value.map(|x| x.0);
        }
        Ok(sf)
    }
}
