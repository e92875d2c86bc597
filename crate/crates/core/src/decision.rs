//! Decision procedure for homotopy commutativity of `ΩM(A)`.
//!
//! Gates run in a fixed order and the report cites the first obstruction
//! found: a minimal nonface of cardinality other than 4, two intersecting
//! minimal nonfaces, a complex that is not `∂Δ³ ⋆ … ⋆ ∂Δ³`. Past the gates
//! the matrix is reduced to standard form, where the parity residues and
//! the mod-2 squares `Sq²q_i` are both computed and must agree.
//!
//! The dual complex is assumed to be a simplicial sphere (the boundary of
//! the dual of a simple polytope); this is not verified.

use serde::{Deserialize, Serialize};

use crate::charmatrix::{
    reduce_to_standard_form, to_factor_major, CharacteristicMatrix, EquivalenceMove, StandardForm,
    StandardFormJson,
};
use crate::error::{Error, Result};
use crate::polyring::{dj_relations, sq2, sq2_of_linear_product, Gf2, Mod2Poly, PolyJson};
use crate::simplicial::{is_join_of_tetrahedron_boundaries, minimal_nonfaces, JoinObstruction, SimplicialComplex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Commutative,
    NotCommutative,
}

/// Which gate or criterion settled the verdict.
///
/// `Sq2` is part of the stable vocabulary; the pipeline evaluates both
/// criteria and always reports `Parity` once they agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    NonfaceCardinality,
    NonfaceIntersection,
    NotTetraJoin,
    Parity,
    Sq2,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    NonfaceCardinality {
        /// Minimal nonfaces whose cardinality is 2, 3 or at least 5.
        nonfaces: Vec<Vec<usize>>,
        cardinalities: Vec<usize>,
    },
    NonfaceIntersection {
        first: Vec<usize>,
        second: Vec<usize>,
    },
    NotTetraJoin {
        reason: String,
    },
    StandardForm {
        /// Vertex relabeling applied to reach factor-major order, if any
        /// (`relabeling[v - 1]` is the new label of vertex `v`).
        #[serde(default, skip_serializing_if = "Option::is_none")]
        relabeling: Option<Vec<usize>>,
        moves: Vec<EquivalenceMove>,
        standard_form: StandardFormJson,
        /// `residues[i][j] = (1,1,1)·a_ij mod 2`.
        residues: Vec<Vec<u8>>,
        /// `Sq²q_i` in `ℤ/2[t]`.
        sq2: Vec<PolyJson>,
    },
}

/// Commutativity verdict of each criterion, recorded when both ran.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub parity: bool,
    pub sq2: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionReport {
    pub verdict: Verdict,
    pub stage: Stage,
    pub certificate: Certificate,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cross_check: Option<CrossCheck>,
}

impl DecisionReport {
    pub fn is_commutative(&self) -> bool {
        self.verdict == Verdict::Commutative
    }

    fn obstruction(stage: Stage, certificate: Certificate) -> Self {
        DecisionReport { verdict: Verdict::NotCommutative, stage, certificate, cross_check: None }
    }
}

/// `r_ij = (a_ij¹ + a_ij² + a_ij³) mod 2` off the diagonal, `0` on it.
pub fn parity_residues(sf: &StandardForm) -> Vec<Vec<u8>> {
    let n = sf.n();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        return 0;
                    }
                    // two's-complement low bit, so negative sums reduce correctly
                    let s: num_bigint::BigInt = sf.block(i, j).iter().sum();
                    u8::from(s.bit(0))
                })
                .collect()
        })
        .collect()
}

/// The mod-2 squares of the cohomology relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sq2Criterion {
    pub squares: Vec<Mod2Poly>,
    /// True iff every `Sq²q_i` vanishes.
    pub all_zero: bool,
}

/// Computes `Sq²q_i` on the expanded relations through the Cartan formula
/// and checks the result against two closed forms: the product formula
/// `(t_i + L₁ + L₂ + L₃)·q_i` and `Σ_{k≠i} r_ik t_k q_i`.
pub fn sq2_criterion(sf: &StandardForm) -> Result<Sq2Criterion> {
    let n = sf.n();
    let pres = dj_relations(sf);
    let residues = parity_residues(sf);
    let mut squares = Vec::with_capacity(n);
    for (i, q) in pres.relations().iter().enumerate() {
        let q2 = q.reduce_mod2();
        let general = sq2(&q2);

        let mut forms = vec![unit_form(n, i)];
        for j in 0..3 {
            forms.push((0..n).map(|k| Gf2(sf.block(i, k)[j].bit(0))).collect());
        }
        let product = sq2_of_linear_product(n, &forms);

        let coeffs: Vec<Gf2> = (0..n).map(|k| Gf2(k != i && residues[i][k] == 1)).collect();
        let residue_form = &Mod2Poly::linear(&coeffs) * &q2;

        if general != product || general != residue_form {
            return Err(Error::CriterionDisagreement(format!(
                "Sq²q_{}: Cartan {general}, product formula {product}, residue formula {residue_form}",
                i + 1
            )));
        }
        squares.push(general);
    }
    let all_zero = squares.iter().all(Mod2Poly::is_zero);
    Ok(Sq2Criterion { squares, all_zero })
}

fn unit_form(n: usize, i: usize) -> Vec<Gf2> {
    (0..n).map(|k| Gf2(k == i)).collect()
}

/// Runs the full pipeline on a characteristic matrix over `k`.
pub fn decide(k: &SimplicialComplex, a: &CharacteristicMatrix) -> Result<DecisionReport> {
    if a.context() != k {
        return Err(Error::DimensionMismatch(
            "matrix columns are indexed by a different complex".into(),
        ));
    }
    a.certify()?;

    let nonfaces = minimal_nonfaces(k);
    let bad: Vec<&Vec<usize>> = nonfaces.minimal_nonfaces.iter().filter(|s| s.len() != 4).collect();
    if !bad.is_empty() {
        return Ok(DecisionReport::obstruction(
            Stage::NonfaceCardinality,
            Certificate::NonfaceCardinality {
                cardinalities: bad.iter().map(|s| s.len()).collect(),
                nonfaces: bad.into_iter().cloned().collect(),
            },
        ));
    }
    if !nonfaces.pairwise_disjoint {
        let sets = &nonfaces.minimal_nonfaces;
        let (first, second) = sets
            .iter()
            .enumerate()
            .find_map(|(i, s)| {
                sets[i + 1..].iter().find(|t| s.iter().any(|v| t.contains(v))).map(|t| (s, t))
            })
            .expect("non-disjoint family has an intersecting pair");
        return Ok(DecisionReport::obstruction(
            Stage::NonfaceIntersection,
            Certificate::NonfaceIntersection { first: first.clone(), second: second.clone() },
        ));
    }
    if let Err(obstruction) = is_join_of_tetrahedron_boundaries(k) {
        return Ok(DecisionReport::obstruction(
            Stage::NotTetraJoin,
            Certificate::NotTetraJoin { reason: obstruction.to_string() },
        ));
    }
    let (matrix, relabeling) = to_factor_major(a)?;
    let (sf, moves) = reduce_to_standard_form(&matrix)?;
    let residues = parity_residues(&sf);
    let parity_ok = residues.iter().flatten().all(|&r| r == 0);
    let sq2 = sq2_criterion(&sf)?;
    if parity_ok != sq2.all_zero {
        return Err(Error::CriterionDisagreement(format!(
            "parity says {parity_ok}, Sq² says {}",
            sq2.all_zero
        )));
    }
    Ok(DecisionReport {
        verdict: if parity_ok { Verdict::Commutative } else { Verdict::NotCommutative },
        stage: Stage::Parity,
        certificate: Certificate::StandardForm {
            relabeling,
            moves,
            standard_form: sf.to_json(),
            residues,
            sq2: sq2.squares.iter().map(Mod2Poly::to_json).collect(),
        },
        cross_check: Some(CrossCheck { parity: parity_ok, sq2: sq2.all_zero }),
    })
}

/// [`decide`] over the matrix's own context complex.
pub fn decide_matrix(a: &CharacteristicMatrix) -> Result<DecisionReport> {
    decide(a.context(), a)
}

/// Maps the join obstruction to the pipeline stage that would report it.
pub fn stage_of(obstruction: &JoinObstruction) -> Stage {
    match obstruction {
        JoinObstruction::NonfaceCardinality { .. } => Stage::NonfaceCardinality,
        JoinObstruction::IntersectingNonfaces { .. } => Stage::NonfaceIntersection,
        JoinObstruction::UncoveredVertices { .. } | JoinObstruction::FacetsDiffer => Stage::NotTetraJoin,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charmatrix::{apply_moves, assemble, tetra_product_automorphism, Polytope};
    use proptest::prelude::*;
    use crate::intmat::IntMatrix;
    use crate::simplicial::build_dual_of_simplex_product;

    fn projective_space(n: usize) -> CharacteristicMatrix {
        let mut rows = Vec::new();
        for i in 0..n {
            let mut r = vec![0i64; n + 1];
            r[i] = 1;
            r[n] = 1;
            rows.push(r);
        }
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        CharacteristicMatrix::new(IntMatrix::from_i64(&refs), Polytope::SimplexProduct { factors: vec![n] })
            .unwrap()
    }

    fn bott(k: i64, n: usize) -> StandardForm {
        StandardForm::with_off_diagonal(n, |i, j| if j == i + 1 { [k, 0, 0] } else { [0, 0, 0] })
    }

    #[test]
    fn cp3_commutative() {
        let r = decide_matrix(&projective_space(3)).unwrap();
        assert_eq!(r.verdict, Verdict::Commutative);
        assert_eq!(r.stage, Stage::Parity);
        assert_eq!(r.cross_check, Some(CrossCheck { parity: true, sq2: true }));
    }

    #[test]
    fn cp4_fails_cardinality_gate() {
        let r = decide_matrix(&projective_space(4)).unwrap();
        assert_eq!(r.verdict, Verdict::NotCommutative);
        assert_eq!(r.stage, Stage::NonfaceCardinality);
        assert_eq!(
            r.certificate,
            Certificate::NonfaceCardinality { nonfaces: vec![vec![1, 2, 3, 4, 5]], cardinalities: vec![5] }
        );
    }

    #[test]
    fn bott_parity() {
        let r = decide_matrix(&assemble(&bott(1, 2))).unwrap();
        assert_eq!(r.verdict, Verdict::NotCommutative);
        assert_eq!(r.stage, Stage::Parity);
        match &r.certificate {
            Certificate::StandardForm { residues, .. } => assert_eq!(residues, &vec![vec![0, 1], vec![0, 0]]),
            other => panic!("{other:?}"),
        }
        assert!(decide_matrix(&assemble(&bott(2, 2))).unwrap().is_commutative());
    }

    #[test]
    fn interval_times_tetrahedron() {
        let a = CharacteristicMatrix::new(
            IntMatrix::from_i64(&[
                &[1, 1, 0, 0, 0, 0],
                &[0, 0, 1, 0, 0, 1],
                &[0, 0, 0, 1, 0, 1],
                &[0, 0, 0, 0, 1, 1],
            ]),
            Polytope::SimplexProduct { factors: vec![1, 3] },
        )
        .unwrap();
        let r = decide_matrix(&a).unwrap();
        assert_eq!(r.stage, Stage::NonfaceCardinality);
        assert_eq!(
            r.certificate,
            Certificate::NonfaceCardinality { nonfaces: vec![vec![1, 2]], cardinalities: vec![2] }
        );
    }

    #[test]
    fn residue_examples() {
        let diag = StandardForm::with_off_diagonal(3, |_, _| [0, 0, 0]);
        assert!(parity_residues(&diag).iter().flatten().all(|&r| r == 0));
        for k in 1..=4 {
            let r = parity_residues(&bott(k, 3));
            for (i, row) in r.iter().enumerate() {
                for (j, &got) in row.iter().enumerate() {
                    let want = if j == i + 1 { (k % 2) as u8 } else { 0 };
                    assert_eq!(got, want);
                }
            }
        }
        let even = StandardForm::with_off_diagonal(2, |i, _| if i == 0 { [1, 1, 0] } else { [0, 0, 0] });
        assert_eq!(parity_residues(&even)[0][1], 0);
        let odd = StandardForm::with_off_diagonal(2, |i, _| if i == 0 { [1, 0, 0] } else { [0, 0, 0] });
        assert_eq!(parity_residues(&odd)[0][1], 1);
        let negative = StandardForm::with_off_diagonal(2, |i, _| if i == 0 { [-1, 0, 0] } else { [0, 0, 0] });
        assert_eq!(parity_residues(&negative)[0][1], 1);
    }

    #[test]
    fn sq2_examples() {
        let cp3 = StandardForm::with_off_diagonal(1, |_, _| unreachable!());
        let c = sq2_criterion(&cp3).unwrap();
        assert!(c.all_zero);
        assert_eq!(c.squares.len(), 1);

        let c = sq2_criterion(&bott(1, 2)).unwrap();
        assert!(!c.all_zero);
        let q1 = dj_relations(&bott(1, 2)).relations()[0].reduce_mod2();
        assert_eq!(c.squares[0], &Mod2Poly::var(2, 1) * &q1);
        assert!(c.squares[1].is_zero());

        let c = sq2_criterion(&bott(2, 3)).unwrap();
        assert!(c.all_zero);
        assert_eq!(c.squares.len(), 3);
    }

    #[test]
    fn permuted_blocks_are_relabeled() {
        let a = assemble(&bott(1, 2));
        // interleave the two factors' vertices
        let perm = [1, 3, 5, 7, 2, 4, 6, 8];
        let shuffled = a.relabel(&perm).unwrap();
        let k = shuffled.context().clone();
        assert_ne!(k, *a.context());
        let r = decide(&k, &shuffled).unwrap();
        assert_eq!(r.verdict, Verdict::NotCommutative);
        match r.certificate {
            Certificate::StandardForm { relabeling, .. } => assert!(relabeling.is_some()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn invalid_matrix_propagates() {
        let a = CharacteristicMatrix::new(
            IntMatrix::from_i64(&[&[1, 0, 0, 1], &[0, 1, 0, 1], &[0, 0, 1, 0]]),
            Polytope::cube_of_tetrahedra(1),
        )
        .unwrap();
        assert!(matches!(decide_matrix(&a), Err(Error::InvalidMatrix { .. })));
    }

    #[test]
    fn context_mismatch() {
        let k = build_dual_of_simplex_product(&[3, 3]).unwrap();
        assert!(decide(&k, &projective_space(3)).is_err());
    }

    fn small_block() -> impl Strategy<Value = [i64; 3]> {
        proptest::array::uniform3(-2i64..=2)
    }

    /// Pairs `(a_12, a_21)` giving valid matrices: every product
    /// `a_12^p · a_21^q` must be 0 or 2.
    fn valid_pair() -> impl Strategy<Value = ([i64; 3], [i64; 3])> {
        let mixed = (prop_oneof![Just(1i64), Just(-1), Just(2), Just(-2)], any::<[bool; 3]>(), any::<[bool; 3]>())
            .prop_map(|(c, sx, sy)| (sx.map(|b| if b { c } else { 0 }), sy.map(|b| if b { 2 / c } else { 0 })));
        prop_oneof![
            small_block().prop_map(|x| (x, [0; 3])),
            small_block().prop_map(|y| ([0; 3], y)),
            mixed,
        ]
    }

    proptest! {
        #[test]
        fn criteria_agree_on_valid_forms((x, y) in valid_pair()) {
            let sf = StandardForm::with_off_diagonal(2, |i, _| if i == 0 { x } else { y });
            prop_assert!(assemble(&sf).validate().is_valid());
            let parity = parity_residues(&sf).iter().flatten().all(|&r| r == 0);
            prop_assert_eq!(sq2_criterion(&sf).unwrap().all_zero, parity);
            let expected = (x.iter().sum::<i64>() % 2 == 0) && (y.iter().sum::<i64>() % 2 == 0);
            prop_assert_eq!(decide_matrix(&assemble(&sf)).unwrap().is_commutative(), expected);
        }

        #[test]
        fn verdict_invariant_under_moves(
            k in 1i64..=4,
            signs in proptest::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], 8),
            swap in any::<bool>(),
            local in Just([0usize, 1, 2, 3]).prop_shuffle(),
        ) {
            let a = assemble(&bott(k, 2));
            let factors = if swap { vec![1, 0] } else { vec![0, 1] };
            let moves = vec![
                EquivalenceMove::ColumnSigns { signs },
                EquivalenceMove::FacetPermutation {
                    perm: tetra_product_automorphism(&factors, &[local, [0, 1, 2, 3]]),
                },
                EquivalenceMove::LeftGl { matrix: IntMatrix::diagonal(&[-1, 1, 1, 1, -1, 1]) },
            ];
            let moved = apply_moves(&a, &moves).unwrap();
            prop_assert_eq!(decide_matrix(&moved).unwrap().verdict, decide_matrix(&a).unwrap().verdict);
        }
    }

    #[test]
    fn report_json_shape() {
        let r = decide_matrix(&projective_space(3)).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["verdict"], "commutative");
        assert_eq!(v["stage"], "parity");
        assert_eq!(v["cross_check"], serde_json::json!({"parity": true, "sq2": true}));
        let back: DecisionReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
