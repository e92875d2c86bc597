//! Steenrod squares on `ℤ/2[t₁..tₙ]` with every `t_i` in degree 2.
//!
//! `Sq¹ t_i = 0` (the generators are reductions of integral classes) and
//! `Sq² t_i = t_i²`; everything else follows from additivity and the Cartan
//! formula `Sq²(xy) = Sq²x·y + Sq¹x·Sq¹y + x·Sq²y`.

use num_traits::One;

use super::poly::{Gf2, Mod2Poly, Monomial, Polynomial};

/// `Sq¹`, identically zero on this class of rings.
pub fn sq1(p: &Mod2Poly) -> Mod2Poly {
    Mod2Poly::zero(p.nvars())
}

/// `Sq²` by peeling one generator at a time off each monomial and applying
/// the Cartan formula.
pub fn sq2(p: &Mod2Poly) -> Mod2Poly {
    let n = p.nvars();
    let mut out = Mod2Poly::zero(n);
    for (m, _) in p.terms() {
        out = &out + &sq2_monomial(m);
    }
    out
}

fn sq2_monomial(m: &Monomial) -> Mod2Poly {
    let n = m.exponents().len();
    let Some(i) = m.exponents().iter().position(|&e| e > 0) else {
        // Sq² of the unit
        return Mod2Poly::zero(n);
    };
    let t = Mod2Poly::var(n, i);
    let rest_exp: Vec<u32> = m
        .exponents()
        .iter()
        .enumerate()
        .map(|(j, &e)| if j == i { e - 1 } else { e })
        .collect();
    let rest = Mod2Poly::monomial(Monomial::new(rest_exp.clone()), Gf2::one());
    let sq2_t = &t * &t;
    let left = &sq2_t * &rest;
    let middle = &sq1(&t) * &sq1(&rest);
    let right = &t * &sq2_monomial(&Monomial::new(rest_exp));
    &(&left + &middle) + &right
}

/// Closed form for a product of degree-2 classes:
/// `Sq²(L₁⋯L_r) = (L₁ + … + L_r)·L₁⋯L_r`.
///
/// Each form is given by its coefficient vector over `t₁..tₙ`.
pub fn sq2_of_linear_product(nvars: usize, forms: &[Vec<Gf2>]) -> Mod2Poly {
    let mut sum = Mod2Poly::zero(nvars);
    let mut prod = Mod2Poly::one(nvars);
    for f in forms {
        assert_eq!(f.len(), nvars, "linear form length");
        let l = Polynomial::linear(f);
        sum = &sum + &l;
        prod = &prod * &l;
    }
    if prod.is_zero() {
        return prod;
    }
    &sum * &prod
}

/// Right-hand side of the Cartan formula for `Sq²(pq)`.
pub fn cartan_sq2(p: &Mod2Poly, q: &Mod2Poly) -> Mod2Poly {
    let a = &sq2(p) * q;
    let b = &sq1(p) * &sq1(q);
    let c = p * &sq2(q);
    &(&a + &b) + &c
}
