//! The matrices `B(k,n)`, the rings
//! `H(k,n) = ℤ[t₁..tₙ]/(t₁⁴ + k t₁³t₂, …, t_{n-1}⁴ + k t_{n-1}³tₙ, tₙ⁴)`,
//! and the invariants separating them.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::charmatrix::{assemble, CharacteristicMatrix, StandardForm};
use crate::error::{Error, Result};
use crate::intmat::IntMatrix;
use crate::polyring::{IntPoly, Monomial, RewriteSystem, RingPresentation};

/// `{"k": 2, "n": 3}` with `k ≥ 1`, `n ≥ 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct FamilyParams {
    k: u32,
    n: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    k: i64,
    n: i64,
}

impl TryFrom<RawParams> for FamilyParams {
    type Error = Error;

    fn try_from(r: RawParams) -> Result<Self> {
        let k = u32::try_from(r.k).map_err(|_| Error::InvalidFamily(format!("k = {}", r.k)))?;
        let n = usize::try_from(r.n).map_err(|_| Error::InvalidFamily(format!("n = {}", r.n)))?;
        FamilyParams::new(k, n)
    }
}

impl FamilyParams {
    pub fn new(k: u32, n: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidFamily("k must be positive".into()));
        }
        if n < 2 {
            return Err(Error::InvalidFamily(format!("n = {n}, need n >= 2")));
        }
        Ok(FamilyParams { k, n })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Standard form of `B(k,n)`: `a_{i,i+1} = ᵗ(k,0,0)`, all other
    /// off-diagonal blocks zero.
    pub fn standard_form(&self) -> StandardForm {
        let k = i64::from(self.k);
        StandardForm::with_off_diagonal(self.n, |i, j| if j == i + 1 { [k, 0, 0] } else { [0, 0, 0] })
    }
}

/// `B(k,n)`: diagonal blocks `(E₃ | ᵗ(1,1,1))`, superdiagonal blocks `kN`
/// with `N` the 3×4 matrix whose only nonzero entry is a 1 in slot (1,4).
pub fn generate_matrix(p: FamilyParams) -> CharacteristicMatrix {
    assemble(&p.standard_form())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HknRing {
    pub params: FamilyParams,
    pub presentation: RingPresentation,
    pub rewrite: RewriteSystem,
}

fn hkn_presentation(k: &BigInt, n: usize) -> RingPresentation {
    let relations = (0..n)
        .map(|i| {
            let t = IntPoly::var(n, i);
            if i + 1 < n {
                &t.pow(4) + &(&t.pow(3) * &IntPoly::var(n, i + 1)).scale(k)
            } else {
                t.pow(4)
            }
        })
        .collect();
    RingPresentation::new(n, relations).expect("homogeneous relations")
}

pub fn hkn_ring(p: FamilyParams) -> HknRing {
    let presentation = hkn_presentation(&BigInt::from(p.k), p.n)
        .with_source(format!("H({},{})", p.k, p.n));
    let rewrite = RewriteSystem::new(&presentation).expect("leading terms t_i^4");
    HknRing { params: p, presentation, rewrite }
}

/// `ℤ[t₁..tₙ]/(t₁⁴, …, tₙ⁴)`, the cohomology of `(CP³)ⁿ`.
pub fn truncated_product_ring(n: usize) -> RewriteSystem {
    let relations = (0..n).map(|i| IntPoly::var(n, i).pow(4)).collect();
    RewriteSystem::new(&RingPresentation::new(n, relations).expect("homogeneous"))
        .expect("coprime pure powers")
}

/// Degree-2 classes `x = Σ a_i t_i` with `x⁴ = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FourthPowerLocus {
    pub bound: u32,
    /// Every coefficient vector in `[-bound, bound]ⁿ` with `nf(x⁴) = 0`,
    /// in lexicographic order.
    pub box_solutions: Vec<Vec<i64>>,
    /// Variables `t_i` (1-based) such that the full locus is `⋃ ℤ·t_i`.
    /// Present only when the pairwise-product argument applies to the ring.
    pub proof_lines: Option<Vec<usize>>,
}

impl FourthPowerLocus {
    /// `"proof_shaped"` when the locus is known to be complete, otherwise
    /// `"box_search"`.
    pub fn method(&self) -> &'static str {
        if self.proof_lines.is_some() {
            "proof_shaped"
        } else {
            "box_search"
        }
    }
}

/// Runs both the box search and, when available, the pairwise-product
/// argument, and checks that they describe the same set inside the box.
///
/// The argument: if no degree-4 monomial other than `t_i²t_j²` contributes
/// to the `t_i²t_j²` coefficient of a normal form, and `t_i²t_j²` is itself
/// standard, then that coefficient of `nf(x⁴)` is `6a_i²a_j²`. Vanishing
/// for every pair forces `x = a·t_i`, and then `x⁴ = 0` iff `nf(t_i⁴) = 0`.
pub fn fourth_power_zero_locus(rs: &RewriteSystem, bound: u32) -> Result<FourthPowerLocus> {
    if bound == 0 {
        return Err(Error::InvalidFamily("coefficient bound must be positive".into()));
    }
    let n = rs.nvars();
    let quartic = QuarticTable::new(rs);

    let b = i64::from(bound);
    let mut box_solutions = Vec::new();
    let mut a = vec![-b; n];
    loop {
        if quartic.fourth_power(&a).is_zero() {
            box_solutions.push(a.clone());
        }
        let mut pos = n;
        loop {
            if pos == 0 {
                let proof_lines = quartic.proof_lines();
                if let Some(lines) = &proof_lines {
                    let mut expected: Vec<Vec<i64>> = vec![vec![0; n]];
                    for &i in lines {
                        for c in (-b..=b).filter(|&c| c != 0) {
                            let mut v = vec![0; n];
                            v[i - 1] = c;
                            expected.push(v);
                        }
                    }
                    expected.sort();
                    if expected != box_solutions {
                        return Err(Error::CriterionDisagreement(format!(
                            "box search found {} solutions, pairwise argument predicts {}",
                            box_solutions.len(),
                            expected.len()
                        )));
                    }
                }
                return Ok(FourthPowerLocus { bound, box_solutions, proof_lines });
            }
            pos -= 1;
            if a[pos] < b {
                a[pos] += 1;
                break;
            }
            a[pos] = -b;
        }
    }
}

/// Normal forms of all degree-4 monomials, so that `nf(x⁴)` is a linear
/// combination with multinomial weights.
struct QuarticTable {
    n: usize,
    entries: Vec<(Vec<u32>, BigInt, IntPoly)>,
    rs: RewriteSystem,
}

impl QuarticTable {
    fn new(rs: &RewriteSystem) -> Self {
        let n = rs.nvars();
        let entries = Monomial::all_of_degree(n, 4)
            .into_iter()
            .map(|m| {
                let e = m.exponents().to_vec();
                let weight = multinomial(&e);
                let nf = rs.normal_form(&IntPoly::monomial(m, BigInt::one()));
                (e, weight, nf)
            })
            .collect();
        QuarticTable { n, entries, rs: rs.clone() }
    }

    fn fourth_power(&self, a: &[i64]) -> IntPoly {
        let mut out = IntPoly::zero(self.n);
        for (e, weight, nf) in &self.entries {
            let mut c = weight.clone();
            for (&ai, &ei) in a.iter().zip(e) {
                c *= BigInt::from(ai).pow(ei);
            }
            if !c.is_zero() {
                out = &out + &nf.scale(&c);
            }
        }
        out
    }

    fn proof_lines(&self) -> Option<Vec<usize>> {
        for i in 0..self.n {
            for j in i + 1..self.n {
                let mut e = vec![0; self.n];
                e[i] = 2;
                e[j] = 2;
                let target = Monomial::new(e.clone());
                if !self.rs.standard_monomials(4).contains(&target) {
                    return None;
                }
                let clean = self
                    .entries
                    .iter()
                    .all(|(f, _, nf)| *f == e || nf.coefficient(&target).is_zero());
                if !clean {
                    return None;
                }
            }
        }
        Some(
            (0..self.n)
                .filter(|&i| self.rs.reduces_to_zero(&IntPoly::var(self.n, i).pow(4)))
                .map(|i| i + 1)
                .collect(),
        )
    }
}

fn multinomial(e: &[u32]) -> BigInt {
    let fact = |k: u32| (1..=k).fold(BigInt::one(), |acc, x| acc * x);
    let total: u32 = e.iter().sum();
    e.iter().fold(fact(total), |acc, &k| acc / fact(k))
}

/// Rank of the degree-2 fourth-power-zero locus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Indecomposability {
    pub rank: usize,
    pub bound: u32,
    pub method: String,
}

/// Maximal number of linearly independent solutions of `x⁴ = 0` in degree 2.
/// Rank 1 rules out a tensor splitting into two factors that are both
/// nontrivial in degree 2.
pub fn indecomposability_witness(rs: &RewriteSystem, bound: u32) -> Result<Indecomposability> {
    let locus = fourth_power_zero_locus(rs, bound)?;
    let rank = span_rank(&locus.box_solutions);
    if let Some(lines) = &locus.proof_lines {
        if lines.len() != rank {
            return Err(Error::CriterionDisagreement(format!(
                "box rank {rank} against {} lines",
                lines.len()
            )));
        }
    }
    Ok(Indecomposability { rank, bound, method: locus.method().into() })
}

fn span_rank(vectors: &[Vec<i64>]) -> usize {
    let rows: Vec<&[i64]> = vectors.iter().map(Vec::as_slice).collect();
    if rows.is_empty() {
        return 0;
    }
    IntMatrix::from_i64(&rows).rank()
}

/// A ring map `H(k,2) → H(l,2)` of the form
/// `t₁ ↦ ε₁(t₁ + c·t₂)`, `t₂ ↦ ε₂·t₂`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IsoWitness {
    pub eps1: i8,
    pub eps2: i8,
    pub c: i64,
}

/// Exact solution of the coefficient equations for one sign `ε = ε₁ε₂`:
/// `6c² + 3kεc = 0`, `4c³ + 3kεc² = 0`, `4c − l + kε = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignCase {
    pub eps: i8,
    /// Common rational roots of the first two equations, as `"p/q"`.
    pub common_roots: Vec<String>,
    /// Whether some common root also satisfies the third equation.
    pub solvable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoDecision {
    pub k: u32,
    pub l: u32,
    pub isomorphic: bool,
    pub search_bound: u32,
    /// Every constrained-shape map within the bound that respects relations.
    pub witnesses: Vec<IsoWitness>,
    pub exact: Vec<SignCase>,
}

/// Image of `q₁ = t₁⁴ + k t₁³t₂` under the witness map, in normal form
/// modulo `H(l,2)`.
fn image_of_q1(k: u32, w: IsoWitness, target: &RewriteSystem) -> IntPoly {
    let t1 = IntPoly::var(2, 0);
    let t2 = IntPoly::var(2, 1);
    let f1 = (&t1 + &t2.scale(&BigInt::from(w.c))).scale(&BigInt::from(w.eps1));
    let f2 = t2.scale(&BigInt::from(w.eps2));
    let q1 = &t1.pow(4) + &(&t1.pow(3) * &t2).scale(&BigInt::from(k));
    target.normal_form(&q1.substitute(&[f1, f2]))
}

/// `(t₁³t₂, t₁²t₂², t₁t₂³)` coefficients predicted by the closed-form
/// equations.
fn predicted_coefficients(k: i64, l: i64, eps: i64, c: i64) -> [i64; 3] {
    [4 * c - l + k * eps, 6 * c * c + 3 * k * eps * c, 4 * c * c * c + 3 * k * eps * c * c]
}

fn solve_sign_case(k: i64, l: i64, eps: i64) -> SignCase {
    // 6c² + 3kεc = 3c(2c + kε): roots 0 and -kε/2
    let candidates = [(0i64, 1i64), (-k * eps, 2)];
    let mut common: Vec<(i64, i64)> = Vec::new();
    for (p, q) in candidates {
        // q³·(4c³ + 3kεc²) = 4p³ + 3kεp²q
        if 4 * p * p * p + 3 * k * eps * p * p * q == 0 && !common.contains(&(p, q)) {
            common.push((p, q));
        }
    }
    // q·(4c - l + kε) = 4p + (kε - l)q
    let solvable = common.iter().any(|&(p, q)| 4 * p + (k * eps - l) * q == 0);
    SignCase {
        eps: eps as i8,
        common_roots: common.iter().map(|(p, q)| format!("{p}/{q}")).collect(),
        solvable,
    }
}

/// Decides `H(k,2) ≅ H(l,2)` over maps of the constrained shape. Every
/// isomorphism has this shape, so enumeration over `|c| ≤ search_bound` and
/// the exact equations must agree.
pub fn iso_decide_n2(k: u32, l: u32, search_bound: u32) -> Result<IsoDecision> {
    if k == 0 || l == 0 {
        return Err(Error::InvalidFamily("k and l must be positive".into()));
    }
    let target = hkn_ring(FamilyParams::new(l, 2)?).rewrite;
    let t1t2 = |a, b| Monomial::new(vec![a, b]);
    let b = i64::from(search_bound);
    let (ki, li) = (i64::from(k), i64::from(l));

    let mut witnesses = Vec::new();
    for eps1 in [1i8, -1] {
        for eps2 in [1i8, -1] {
            let eps = i64::from(eps1 * eps2);
            for c in -b..=b {
                let w = IsoWitness { eps1, eps2, c };
                let image = image_of_q1(k, w, &target);
                let got = [t1t2(3, 1), t1t2(2, 2), t1t2(1, 3)].map(|m| image.coefficient(&m));
                let want = predicted_coefficients(ki, li, eps, c).map(BigInt::from);
                if got != want || image.term_count() > 3 - want.iter().filter(|x| x.is_zero()).count() {
                    return Err(Error::CriterionDisagreement(format!(
                        "normal form {image} of f(q1) for {w:?} does not match the coefficient equations"
                    )));
                }
                if image.is_zero() {
                    witnesses.push(w);
                }
            }
        }
    }

    let exact: Vec<SignCase> = [1, -1].iter().map(|&eps| solve_sign_case(ki, li, eps)).collect();
    let exact_iso = exact.iter().any(|s| s.solvable);
    let enumerated_iso = !witnesses.is_empty();
    if exact_iso != enumerated_iso {
        return Err(Error::CriterionDisagreement(format!(
            "enumeration says {enumerated_iso}, exact equations say {exact_iso}"
        )));
    }
    Ok(IsoDecision { k, l, isomorphic: exact_iso, search_bound, witnesses, exact })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoReport {
    pub k: u32,
    pub l: u32,
    pub n: usize,
    pub isomorphic: bool,
    /// The decision on the subalgebra generated by `t_{n-1}, tₙ`, which any
    /// isomorphism `H(k,n) → H(l,n)` restricts to.
    pub restricted: IsoDecision,
}

pub fn default_search_bound(k: u32, l: u32) -> u32 {
    3 * k.max(l)
}

/// `H(k,n) ≅ H(l,n)`, decided on the last two variables.
pub fn iso_invariants(k: u32, l: u32, n: usize) -> Result<IsoReport> {
    iso_invariants_with_bound(k, l, n, default_search_bound(k, l))
}

pub fn iso_invariants_with_bound(k: u32, l: u32, n: usize, search_bound: u32) -> Result<IsoReport> {
    FamilyParams::new(k, n)?;
    FamilyParams::new(l, n)?;
    let restricted = iso_decide_n2(k, l, search_bound)?;
    Ok(IsoReport { k, l, n, isomorphic: restricted.isomorphic, restricted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charmatrix::reduce_to_standard_form;
    use crate::decision::decide_matrix;
    use crate::polyring::{dj_relations, rank_table, truncated_poincare};
    use proptest::prelude::*;

    fn params(k: u32, n: usize) -> FamilyParams {
        FamilyParams::new(k, n).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(FamilyParams::new(0, 2).is_err());
        assert!(FamilyParams::new(1, 1).is_err());
        assert!(serde_json::from_str::<FamilyParams>(r#"{"k":-1,"n":2}"#).is_err());
        assert_eq!(serde_json::from_str::<FamilyParams>(r#"{"k":2,"n":3}"#).unwrap(), params(2, 3));
    }

    #[test]
    fn generated_matrices() {
        let a = generate_matrix(params(1, 2));
        assert_eq!((a.rank(), a.facet_count()), (6, 8));
        let e = a.entries();
        for r in 0..3 {
            for c in 4..8 {
                let want = if (r, c) == (0, 7) { 1 } else { 0 };
                assert_eq!(e[(r, c)], BigInt::from(want), "({r},{c})");
            }
        }
        assert!(a.validate().is_valid());

        let a = generate_matrix(params(2, 2));
        assert_eq!(a.entries()[(0, 7)], BigInt::from(2));
        assert!(decide_matrix(&a).unwrap().is_commutative());

        let a = generate_matrix(params(3, 3));
        assert_eq!((a.rank(), a.facet_count()), (9, 12));
        assert_eq!(a.entries()[(0, 7)], BigInt::from(3));
        assert_eq!(a.entries()[(3, 11)], BigInt::from(3));
        assert_eq!(a.entries()[(0, 11)], BigInt::zero());
        assert!(a.validate().is_valid());
    }

    #[test]
    fn ring_relations() {
        let t = |i| IntPoly::var(3, i);
        let r = hkn_ring(params(1, 3));
        assert_eq!(
            r.presentation.relations(),
            &[&t(0).pow(4) + &(&t(0).pow(3) * &t(1)), &t(1).pow(4) + &(&t(1).pow(3) * &t(2)), t(2).pow(4)]
        );
        let r = hkn_ring(params(2, 2));
        assert_eq!(r.presentation.relations()[0].to_string(), "t1^4 + 2*t1^3*t2");
    }

    #[test]
    fn ring_matches_pipeline() {
        for k in 1..=4 {
            for n in 2..=3 {
                let p = params(k, n);
                let (sf, _) = reduce_to_standard_form(&generate_matrix(p)).unwrap();
                assert_eq!(dj_relations(&sf).relations(), hkn_ring(p).presentation.relations());
            }
        }
    }

    #[test]
    fn ranks_are_truncated_poincare() {
        for k in 1..=2 {
            for n in 2..=3 {
                let r = hkn_ring(params(k, n));
                let table = rank_table(&r.presentation, 6 * n as u32).unwrap();
                assert_eq!(table, truncated_poincare(n, 4));
            }
        }
    }

    #[test]
    fn locus_examples() {
        let r = hkn_ring(params(1, 2));
        let locus = fourth_power_zero_locus(&r.rewrite, 3).unwrap();
        let expected: Vec<Vec<i64>> = (-3..=3).map(|a| vec![0, a]).collect();
        assert_eq!(locus.box_solutions, expected);
        assert_eq!(locus.proof_lines, Some(vec![2]));
        assert_eq!(locus.method(), "proof_shaped");

        for k in 1..=3 {
            let rs = hkn_ring(params(k, 2)).rewrite;
            assert_eq!(
                rs.normal_form(&IntPoly::var(2, 0).pow(4)),
                (&IntPoly::var(2, 0).pow(3) * &IntPoly::var(2, 1)).scale(&BigInt::from(-i64::from(k)))
            );
        }

        let x = &IntPoly::var(2, 0) + &IntPoly::var(2, 1);
        let nf = r.rewrite.normal_form(&x.pow(4));
        assert_eq!(nf.coefficient(&Monomial::new(vec![2, 2])), BigInt::from(6));
    }

    #[test]
    fn quartic_table_matches_direct_expansion() {
        let rs = hkn_ring(params(2, 3)).rewrite;
        let table = QuarticTable::new(&rs);
        for a in [[1, -2, 3], [0, 1, 1], [2, 0, -1]] {
            let x = IntPoly::linear_i64(&a);
            assert_eq!(table.fourth_power(&a), rs.normal_form(&x.pow(4)));
        }
    }

    #[test]
    fn indecomposability_examples() {
        let w = indecomposability_witness(&hkn_ring(params(1, 2)).rewrite, 2).unwrap();
        assert_eq!(w, Indecomposability { rank: 1, bound: 2, method: "proof_shaped".into() });
        let w = indecomposability_witness(&hkn_ring(params(3, 3)).rewrite, 2).unwrap();
        assert_eq!(w.rank, 1);
        let contrast = truncated_product_ring(2);
        let locus = fourth_power_zero_locus(&contrast, 2).unwrap();
        assert_eq!(locus.proof_lines, Some(vec![1, 2]));
        assert_eq!(indecomposability_witness(&contrast, 2).unwrap().rank, 2);
    }

    #[test]
    fn iso_examples() {
        let d = iso_decide_n2(1, 1, 3).unwrap();
        assert!(d.isomorphic);
        assert!(d.witnesses.contains(&IsoWitness { eps1: 1, eps2: 1, c: 0 }));

        let d = iso_decide_n2(1, 2, 6).unwrap();
        assert!(!d.isomorphic);
        assert!(d.witnesses.is_empty());
        for case in &d.exact {
            assert_eq!(case.common_roots, vec!["0/1".to_string()]);
            assert!(!case.solvable);
        }

        let d = iso_decide_n2(3, 3, 5).unwrap();
        assert!(d.isomorphic);
        assert!(d.witnesses.iter().all(|w| w.c == 0 && w.eps1 * w.eps2 == 1));
        assert_eq!(d.witnesses.len(), 2);

        assert!(iso_invariants(2, 2, 3).unwrap().isomorphic);
        assert!(!iso_invariants(1, 2, 3).unwrap().isomorphic);
        assert!(!iso_invariants(4, 2, 4).unwrap().isomorphic);
        assert!(iso_invariants(1, 2, 1).is_err());
    }

    proptest! {
        #[test]
        fn locus_closed_under_negation_and_scaling(k in 1u32..=3, n in 2usize..=3) {
            let locus = fourth_power_zero_locus(&hkn_ring(params(k, n)).rewrite, 2).unwrap();
            for v in &locus.box_solutions {
                for s in -2i64..=2 {
                    let w: Vec<i64> = v.iter().map(|x| s * x).collect();
                    if w.iter().all(|x| x.abs() <= 2) {
                        prop_assert!(locus.box_solutions.contains(&w));
                    }
                }
            }
        }
    }
}
