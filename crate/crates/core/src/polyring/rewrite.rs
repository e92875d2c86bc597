//! Normal forms modulo relations whose leading monomials are pairwise
//! coprime pure powers.
//!
//! With leading monomials `t_i^{d_i}` on distinct variables the relations
//! already form a Gröbner basis (coprime leading terms), so reduction by
//! the oriented rules `t_i^{d_i} → tail` is terminating and confluent.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::poly::{IntPoly, Monomial};
use super::presentation::RingPresentation;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    /// Variable index (0-based) of the leading power.
    pub var: usize,
    pub exponent: u32,
    /// `t_var^exponent ≡ tail` in the quotient.
    pub tail: IntPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteSystem {
    nvars: usize,
    rules: Vec<Rule>,
}

impl RewriteSystem {
    /// Orients each relation by its grlex-leading term. Fails unless every
    /// leading monomial is a pure power with coefficient ±1 and no two share
    /// a variable.
    pub fn new(pres: &RingPresentation) -> Result<Self> {
        let n = pres.nvars();
        let mut rules: Vec<Rule> = Vec::new();
        for (idx, q) in pres.relations().iter().enumerate() {
            let (lm, lc) = q
                .leading_term()
                .ok_or_else(|| Error::NotRewriteAdmissible(format!("relation {} is zero", idx + 1)))?;
            let support: Vec<usize> =
                lm.exponents().iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i).collect();
            if support.len() != 1 {
                return Err(Error::NotRewriteAdmissible(format!(
                    "leading monomial {lm} of relation {} is not a pure power",
                    idx + 1
                )));
            }
            if !lc.abs().is_one() {
                return Err(Error::NotRewriteAdmissible(format!(
                    "leading coefficient {lc} of relation {} is not a unit",
                    idx + 1
                )));
            }
            let var = support[0];
            if rules.iter().any(|r| r.var == var) {
                return Err(Error::NotRewriteAdmissible(format!(
                    "two leading monomials are powers of t{}",
                    var + 1
                )));
            }
            // lc·LM + rest = 0  ⇒  LM = -lc·rest  (lc = ±1)
            let mut rest = q.clone();
            rest.add_term(lm.clone(), -lc.clone());
            let tail = rest.scale(&-lc.clone());
            rules.push(Rule { var, exponent: lm.exponents()[var], tail });
        }
        Ok(RewriteSystem { nvars: n, rules })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Rule index whose lhs divides `m`, lowest index first.
    fn applicable(&self, m: &Monomial) -> impl Iterator<Item = usize> + '_ {
        let e = m.exponents().to_vec();
        self.rules
            .iter()
            .enumerate()
            .filter(move |(_, r)| e[r.var] >= r.exponent)
            .map(|(i, _)| i)
    }

    fn rewrite_once(&self, p: &IntPoly, m: &Monomial, rule: usize) -> IntPoly {
        let r = &self.rules[rule];
        let c = p.coefficient(m);
        let lhs = {
            let mut e = vec![0; self.nvars];
            e[r.var] = r.exponent;
            Monomial::new(e)
        };
        let cofactor = lhs.quotient(m);
        let mut out = p.clone();
        out.add_term(m.clone(), -c.clone());
        &out + &r.tail.mul_monomial(&cofactor, &c)
    }

    /// Normal form, always rewriting the grlex-largest reducible term with
    /// the lowest-index applicable rule.
    pub fn normal_form(&self, p: &IntPoly) -> IntPoly {
        self.normal_form_with(p, |_| 0)
    }

    /// Normal form with a caller-chosen strategy: at every step `choose`
    /// receives the number of (term, rule) redexes, listed from the largest
    /// term down, and returns the index of the one to rewrite.
    pub fn normal_form_with(&self, p: &IntPoly, mut choose: impl FnMut(usize) -> usize) -> IntPoly {
        assert_eq!(p.nvars(), self.nvars, "polynomial in wrong ring");
        let mut cur = p.clone();
        loop {
            let redexes: Vec<(Monomial, usize)> = cur
                .terms()
                .rev()
                .flat_map(|(m, _)| self.applicable(m).map(move |r| (m.clone(), r)))
                .collect();
            if redexes.is_empty() {
                return cur;
            }
            let pick = choose(redexes.len()).min(redexes.len() - 1);
            let (m, r) = &redexes[pick];
            cur = self.rewrite_once(&cur, m, *r);
        }
    }

    /// Membership in the relation ideal.
    pub fn reduces_to_zero(&self, p: &IntPoly) -> bool {
        self.normal_form(p).is_zero()
    }

    /// Standard monomials of a given polynomial degree (no rule applies).
    pub fn standard_monomials(&self, degree: u32) -> Vec<Monomial> {
        Monomial::all_of_degree(self.nvars, degree)
            .into_iter()
            .filter(|m| self.applicable(m).next().is_none())
            .collect()
    }

    /// Coefficient of a monomial in the normal form, as an integer.
    pub fn normal_coefficient(&self, p: &IntPoly, m: &Monomial) -> BigInt {
        self.normal_form(p).coefficient(m)
    }
}
