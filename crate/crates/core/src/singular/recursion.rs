//! Recursive construction of the `S_{2,p}(t) v` singular vector, independent
//! of the closed-form coefficients.
//!
//! With `v^(0) = v` and, for `1 <= k <= 2p - 1`,
//!
//! ```text
//! v^(k) = 2t sum_{j=1}^{k} ((j-1)(2t-1) + 2k - 2p - 1) e_j v^(k-j) / (k (2p-k) (k-p-t))
//! ```
//!
//! the vector `w = 2t sum_{j=1}^{2p} ((j-1)(2t-1) + 2p - 1) e_j v^(2p-j)`
//! is singular in `V(h_{2,p}(t), c(t))`.

use std::sync::Arc;

use num_bigint::BigInt;

use super::{kac_params, normalize_leading, KacLabel, SizeCap};
use crate::arith::{factorial, Rational, RationalFunction};
use crate::error::Result;
use crate::verma::{ModuleParams, VermaElement};

type Rf = RationalFunction;

fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `(j-1)(2t-1) + 2k - 2p - 1`
fn step_weight(j: i64, k: i64, p: i64) -> Rf {
    Rf::linear(q(-(j - 1) + 2 * k - 2 * p - 1), q(2 * (j - 1)))
}

/// `2t sum_{j=1}^{k} weight(j, k) e_j v^(k-j)`, the unnormalized numerator
/// shared by `v^(k)` and `w`.
fn weighted_sum(previous: &[VermaElement<Rf>], k: i64, p: i64, params: &Arc<ModuleParams<Rf>>) -> VermaElement<Rf> {
    let mut acc = VermaElement::zero(params.clone());
    for j in 1..=k {
        let lower = &previous[(k - j) as usize];
        let term = lower.apply_word(&[j as u32]).scale(&step_weight(j, k, p));
        acc = acc.add(&term);
    }
    acc.scale(&(Rf::t() * &Rf::from(2)))
}

/// Module `V(h_{2,p}(t), c(t))` the recursion lives in.
pub fn recursion_params(p: u32) -> Arc<ModuleParams<Rf>> {
    Arc::new(kac_params(KacLabel::new(2, p)))
}

/// `v^(0), ..., v^(2p-1)`.
pub fn recursion_vectors(p: u32, cap: SizeCap) -> Result<Vec<VermaElement<Rf>>> {
    assert!(p >= 1);
    cap.check(2 * p)?;
    let params = recursion_params(p);
    let pi = p as i64;
    let mut vectors = vec![VermaElement::vacuum(params.clone())];
    for k in 1..2 * pi {
        // k (2p - k) (k - p - t)
        let divisor = Rf::linear(q(k - pi), q(-1)) * &Rf::from(k * (2 * pi - k));
        let numerator = weighted_sum(&vectors, k, pi, &params);
        vectors.push(numerator.scale(&divisor.inv()?));
    }
    Ok(vectors)
}

/// The vector `w` in `V_{2p}`.
pub fn recursion_w(p: u32, cap: SizeCap) -> Result<VermaElement<Rf>> {
    let vectors = recursion_vectors(p, cap)?;
    let params = vectors[0].params().clone();
    Ok(weighted_sum(&vectors, 2 * p as i64, p as i64, &params))
}

/// Closed form of the `e_1^{2p}` coefficient of `w`:
/// `(2t)^{2p} prod_{k=0}^{2p-1} (2p-1-2k) / ((2p-1)!^2 prod_{q=1}^{2p-1} (p-t-q))`.
pub fn w_leading_coefficient(p: u32) -> Rf {
    let pi = p as i64;
    let odd: i64 = (0..2 * pi).map(|k| 2 * pi - 1 - k * 2).product();
    let fact = factorial(2 * p - 1);
    let mut value = (Rf::t() * &Rf::from(2)).pow(2 * p) * &Rf::from(odd);
    value *= &Rf::from(Rational::from_integer(&fact * &fact)).inv().expect("nonzero");
    for qq in 1..2 * pi {
        value *= &Rf::linear(q(pi - qq), q(-1)).inv().expect("nonzero");
    }
    value
}

/// `w` rescaled so its `e_1^{2p}` coefficient is one, i.e. `S_{2,p}(t) v`.
pub fn normalize_w(w: &VermaElement<Rf>, p: u32) -> Result<VermaElement<Rf>> {
    debug_assert!(w.grade()?.is_none_or(|g| g == 2 * p));
    normalize_leading(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::singular::{apply_to_vacuum, build_s2p, pure_e1_coefficient};
    use crate::verma::Monomial;
    use num_traits::One;

    #[test]
    fn first_step_for_p_one() {
        let vectors = recursion_vectors(1, SizeCap::DEFAULT).unwrap();
        let e1v = VermaElement::monomial(vectors[0].params().clone(), Monomial::new(vec![1]).unwrap(), Rf::one());
        assert_eq!(vectors[1], e1v.scale(&Rf::from(2)));
    }

    #[test]
    fn normalized_w_matches_closed_form_for_small_p() {
        for p in 1..=2 {
            let w = recursion_w(p, SizeCap::DEFAULT).unwrap();
            assert_eq!(pure_e1_coefficient(&w).unwrap(), w_leading_coefficient(p));
            let normalized = normalize_w(&w, p).unwrap();
            let closed = apply_to_vacuum(
                &build_s2p(p, SizeCap::DEFAULT).unwrap(),
                kac_params(KacLabel::new(2, p)),
            );
            assert_eq!(normalized, closed, "p = {p}");
        }
    }

    #[test]
    fn zero_vector_cannot_be_normalized() {
        let params = recursion_params(1);
        assert!(normalize_w(&VermaElement::zero(params), 1).is_err());
    }

    /// `-(a + b t)` as a scalar.
    fn neg_linear(a: i64, b: i64) -> Rf {
        Rf::linear(q(-a), q(-b))
    }

    #[test]
    fn lowering_recurrences() {
        for p in 1..=4u32 {
            let v = recursion_vectors(p, SizeCap::DEFAULT).unwrap();
            let pi = p as i64;
            assert!(v[1].apply_generator(-2).is_zero());
            for k in 1..2 * pi {
                let lowered = v[k as usize].apply_generator(-1);
                assert_eq!(
                    lowered,
                    v[k as usize - 1].scale(&neg_linear(pi + 2 - k, 3)),
                    "e_-1, p={p} k={k}"
                );
                if k >= 2 {
                    let lowered = v[k as usize].apply_generator(-2);
                    assert_eq!(
                        lowered,
                        v[k as usize - 2].scale(&neg_linear(pi + 4 - k, 5)),
                        "e_-2, p={p} k={k}"
                    );
                }
            }
        }
    }

    #[test]
    fn agrees_with_closed_form_up_to_three() {
        for p in 1..=3 {
            let w = normalize_w(&recursion_w(p, SizeCap::DEFAULT).unwrap(), p).unwrap();
            let closed = apply_to_vacuum(
                &build_s2p(p, SizeCap::DEFAULT).unwrap(),
                kac_params(KacLabel::new(2, p)),
            );
            assert_eq!(w, closed, "p = {p}");
        }
    }
}
