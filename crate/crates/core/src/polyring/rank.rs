//! Graded ranks of `ℤ[t]/(q₁..q_r)` over the rationals.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::poly::Monomial;
use super::presentation::RingPresentation;
use crate::error::{Error, Result};
use crate::intmat::rank_in_place;

/// Rank of the degree-`degree` part (cohomological grading, `|t_i| = 2`):
/// the number of monomials minus the rank of the span of all `m·q_i` of that
/// degree.
pub fn graded_rank(pres: &RingPresentation, degree: u32) -> Result<usize> {
    if degree % 2 == 1 {
        return Err(Error::OddDegree(degree));
    }
    let d = degree / 2;
    let n = pres.nvars();
    let basis = Monomial::all_of_degree(n, d);
    let column: HashMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();

    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for q in pres.relations() {
        let Some(qd) = q.homogeneous_degree() else { continue };
        if qd > d {
            continue;
        }
        for m in Monomial::all_of_degree(n, d - qd) {
            let mut row = vec![BigInt::zero(); basis.len()];
            for (mq, c) in q.terms() {
                row[column[&mq.mul(&m)]] = c.clone();
            }
            rows.push(row);
        }
    }
    let ideal_rank = rank_in_place(&mut rows, basis.len());
    Ok(basis.len() - ideal_rank)
}

/// Ranks in degrees `0, 2, …, top`. For presentations with as many
/// relations as variables the natural `top` is `2·Σ(deg q_i − 1)` in
/// polynomial degrees, see [`socle_degree`].
pub fn rank_table(pres: &RingPresentation, top: u32) -> Result<Vec<usize>> {
    (0..=top / 2).map(|d| graded_rank(pres, 2 * d)).collect()
}

/// Cohomological degree of the top class of a complete intersection with
/// the given relations: `2·Σ(deg q_i − 1)` (polynomial degrees). For an
/// `n`-fold product of `CP³`-type relations of degree 8 this is `6n`.
pub fn socle_degree(pres: &RingPresentation) -> u32 {
    pres.relations()
        .iter()
        .filter_map(|q| q.homogeneous_degree())
        .map(|d| 2 * d.saturating_sub(1))
        .sum()
}

/// Coefficients of `(1 + x² + … + x^{2(d-1)})ⁿ` listed by even degree; the
/// Poincaré polynomial of a regular sequence of `n` relations of polynomial
/// degree `d`.
pub fn truncated_poincare(n: usize, d: u32) -> Vec<usize> {
    let mut coeffs = vec![1usize];
    for _ in 0..n {
        let mut next = vec![0usize; coeffs.len() + d as usize - 1];
        for (i, &c) in coeffs.iter().enumerate() {
            for j in 0..d as usize {
                next[i + j] += c;
            }
        }
        coeffs = next;
    }
    coeffs
}
