//! Closed-form coefficients of the `S_{p,1}(t)` and `S_{2,p}(t)` families.

use num_bigint::BigInt;
use num_traits::One;

use super::{compositions, Composition, CompositionSum, SizeCap};
use crate::arith::{factorial, Rational, RationalFunction, UniPoly};
use crate::error::Result;

fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `constant * prod(numerator) / prod(denominator)` for low-degree factors.
/// Factors that agree up to a scalar are cancelled before multiplying out,
/// which keeps the final gcd reduction cheap.
fn factored_quotient(constant: Rational, numerator: Vec<UniPoly>, denominator: Vec<UniPoly>) -> RationalFunction {
    let mut constant = constant;
    let mut numerator: Vec<UniPoly> = numerator
        .into_iter()
        .map(|f| {
            let lc = f.leading().expect("nonzero factor").clone();
            constant *= &lc;
            f.monic()
        })
        .collect();
    let mut remaining_den = Vec::new();
    for f in denominator {
        let lc = f.leading().expect("nonzero factor").clone();
        constant /= &lc;
        let f = f.monic();
        if f.is_one() {
            continue;
        }
        match numerator.iter().position(|g| *g == f) {
            Some(i) => {
                numerator.swap_remove(i);
            }
            None => remaining_den.push(f),
        }
    }
    let num = numerator.iter().fold(UniPoly::constant(constant), |acc, f| &acc * f);
    let den = remaining_den.iter().fold(UniPoly::one(), |acc, f| &acc * f);
    RationalFunction::new(num, den).expect("denominator factors are nonzero")
}

/// Rational constant `c_p(i_1, ..., i_s) = (p-1)!^2 / prod_l P_l (p - P_l)`
/// over the proper prefix sums `P_l`.
pub fn bsa_coefficient(p: u32, comp: &Composition) -> Rational {
    assert_eq!(comp.total(), p, "composition must sum to p");
    let fact = factorial(p - 1);
    let denominator: BigInt = comp
        .proper_prefix_sums()
        .map(|prefix| BigInt::from(prefix) * BigInt::from(p - prefix))
        .product();
    Rational::new(&fact * &fact, denominator)
}

/// `S_{p,1}(t) = sum c_p(i_1..i_s) t^{p-s} e_{i_1} ... e_{i_s}` over all
/// compositions of `p`.
pub fn build_sp1(p: u32, cap: SizeCap) -> Result<CompositionSum<RationalFunction>> {
    let terms = compositions(p, cap)?.into_iter().map(|comp| {
        let power = p as i64 - comp.len() as i64;
        let coeff = RationalFunction::laurent_monomial(bsa_coefficient(p, &comp), power);
        (comp, coeff)
    });
    Ok(CompositionSum::new(p, terms))
}

/// Coefficient `f_p(i_1, ..., i_s)` of the word `e_{i_1} ... e_{i_s}` in
/// `S_{2,p}(t)`, for a composition of `2p`:
///
/// ```text
///            (2p-1)!^2 (2t)^{s-2p} prod_{r=1}^{2p-1} (p-t-r) prod_{m=1}^{s} (i_m (2t+1) + 2(p - t - P_m))
/// f_p = -----------------------------------------------------------------------------------------------
///             prod_{l=0}^{2p-1} (2p-1-2l) prod_{l=1}^{s-1} P_l (2p - P_l) (p - t - P_l)
/// ```
///
/// with `P_m = i_1 + ... + i_m`. The odd-integer product carries its sign.
pub fn f_coefficient(p: u32, comp: &Composition) -> RationalFunction {
    assert!(p >= 1);
    assert_eq!(comp.total(), 2 * p, "composition must sum to 2p");
    let p = p as i64;
    let s = comp.len() as i64;
    let fact = factorial((2 * p - 1) as u32);
    let mut constant = Rational::from_integer(&fact * &fact);

    let mut numerator = Vec::new();
    let mut denominator = Vec::new();

    // (2t)^{s - 2p}, s <= 2p
    let deficit = (2 * p - s) as usize;
    constant /= Rational::from_integer(BigInt::from(2).pow(deficit as u32));
    denominator.extend(std::iter::repeat_n(UniPoly::t(), deficit));

    // p - t - r
    numerator.extend((1..2 * p).map(|r| UniPoly::linear(q(p - r), q(-1))));

    // i_m (2t + 1) + 2 (p - t - P_m) = (i_m + 2p - 2 P_m) + (2 i_m - 2) t
    let mut prefix = 0i64;
    for &part in comp.parts() {
        let part = part as i64;
        prefix += part;
        numerator.push(UniPoly::linear(q(part + 2 * p - 2 * prefix), q(2 * part - 2)));
    }

    let odd: i64 = (0..2 * p).map(|l| 2 * p - 1 - 2 * l).product();
    constant /= q(odd);

    for prefix in comp.proper_prefix_sums() {
        let prefix = prefix as i64;
        constant /= q(prefix * (2 * p - prefix));
        denominator.push(UniPoly::linear(q(p - prefix), q(-1)));
    }

    factored_quotient(constant, numerator, denominator)
}

/// `S_{2,p}(t) = sum f_p(i_1..i_s) e_{i_1} ... e_{i_s}` over all compositions of `2p`.
pub fn build_s2p(p: u32, cap: SizeCap) -> Result<CompositionSum<RationalFunction>> {
    let terms = compositions(2 * p, cap)?.into_iter().map(|comp| {
        let coeff = f_coefficient(p, &comp);
        (comp, coeff)
    });
    Ok(CompositionSum::new(2 * p, terms))
}

/// `prod_{q=1}^{p} (t^2 - (p + 1 - 2q)^2) / t^p`, the coefficient of `e_2^p`.
pub fn all_twos_coefficient(p: u32) -> RationalFunction {
    let p = p as i64;
    let factors = (1..=p).map(|k| {
        let a = p + 1 - 2 * k;
        UniPoly::from_coeffs(vec![q(-a * a), q(0), q(1)])
    });
    let num = factors.fold(UniPoly::one(), |acc, f| &acc * &f);
    let den = UniPoly::monomial(Rational::one(), p as usize);
    RationalFunction::new(num, den).expect("t^p is nonzero")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;
    use num_traits::Zero;

    type Rf = RationalFunction;

    fn comp(parts: &[u32]) -> Composition {
        Composition::new(parts.to_vec()).unwrap()
    }

    fn t() -> Rf {
        Rf::t()
    }

    fn c(n: i64) -> Rf {
        Rf::from(n)
    }

    #[test]
    fn bsa_examples() {
        assert_eq!(bsa_coefficient(3, &comp(&[1, 2])), rational(2, 1));
        assert_eq!(bsa_coefficient(3, &comp(&[3])), rational(4, 1));
        for p in 1..=9 {
            assert_eq!(
                bsa_coefficient(p, &Composition::repeated(1, p as usize)),
                rational(1, 1)
            );
        }
    }

    #[test]
    fn overlapping_families_agree() {
        let cap = SizeCap::DEFAULT;
        assert_eq!(build_s2p(1, cap).unwrap(), build_sp1(2, cap).unwrap());
    }

    #[test]
    fn low_sp1_match_printed_examples() {
        let cap = SizeCap::DEFAULT;
        let s11 = build_sp1(1, cap).unwrap();
        assert_eq!(s11, CompositionSum::new(1, [(comp(&[1]), c(1))]));
        let s21 = build_sp1(2, cap).unwrap();
        assert_eq!(s21, CompositionSum::new(2, [(comp(&[1, 1]), c(1)), (comp(&[2]), t())]));
        let s31 = build_sp1(3, cap).unwrap();
        let expected = CompositionSum::new(
            3,
            [
                (comp(&[1, 1, 1]), c(1)),
                (comp(&[1, 2]), t() * &c(2)),
                (comp(&[2, 1]), t() * &c(2)),
                (comp(&[3]), t() * &t() * &c(4)),
            ],
        );
        assert_eq!(s31, expected);
    }

    #[test]
    fn f_examples() {
        assert_eq!(f_coefficient(1, &comp(&[2])), t());
        assert_eq!(f_coefficient(1, &comp(&[1, 1])), c(1));
        let one_minus_t2 = c(1) - &(t() * &t());
        let t_inv = t().inv().unwrap();
        assert_eq!(
            f_coefficient(2, &comp(&[2, 2])),
            one_minus_t2.clone() * &one_minus_t2 * &t_inv * &t_inv
        );
        assert_eq!(f_coefficient(2, &comp(&[1, 2, 1])), t() * &c(4));
        let four_minus_t2 = c(4) - &(t() * &t());
        assert_eq!(
            f_coefficient(3, &comp(&[6])),
            c(20) * &one_minus_t2 * &four_minus_t2 * &t_inv.pow(3)
        );
    }

    /// Literal evaluation of the formula at a rational point, no cancellation.
    fn f_at(p: i64, parts: &[i64], at: &Rational) -> Rational {
        let s = parts.len() as i64;
        let fact: Rational = (1..2 * p).map(q).product();
        let two_t = q(2) * at;
        let mut num = &fact * &fact;
        for _ in 0..(2 * p - s) {
            num /= &two_t;
        }
        for r in 1..2 * p {
            num *= q(p - r) - at;
        }
        let mut prefix = 0;
        for &i in parts {
            prefix += i;
            num *= q(i) * (q(2) * at + q(1)) + q(2) * (q(p - prefix) - at);
        }
        let mut den: Rational = (0..2 * p).map(|l| q(2 * p - 1 - 2 * l)).product();
        let mut prefix = 0;
        for &i in &parts[..parts.len() - 1] {
            prefix += i;
            den *= q(prefix * (2 * p - prefix)) * (q(p - prefix) - at);
        }
        num / den
    }

    #[test]
    fn f_agrees_with_pointwise_formula() {
        let points = [rational(-3, 2), rational(-2, 3), rational(5, 7), rational(7, 2)];
        for p in 1..=4u32 {
            for comp in compositions(2 * p, SizeCap::DEFAULT).unwrap() {
                let f = f_coefficient(p, &comp);
                let parts: Vec<i64> = comp.parts().iter().map(|&i| i as i64).collect();
                for at in &points {
                    assert_eq!(f.evaluate_at(at).unwrap(), f_at(p as i64, &parts, at), "p={p} {comp}");
                }
            }
        }
    }

    #[test]
    fn all_twos_examples() {
        let t2 = t() * &t();
        assert_eq!(all_twos_coefficient(1), t());
        let a = t2.clone() - &c(1);
        assert_eq!(all_twos_coefficient(2), a.clone() * &a * &t().inv().unwrap().pow(2));
        let b = t2.clone() - &c(4);
        assert_eq!(
            all_twos_coefficient(3),
            b.clone() * &b * &t2 * &t().inv().unwrap().pow(3)
        );
        assert!(!all_twos_coefficient(4).is_zero());
    }

    #[test]
    fn all_coefficients_are_laurent() {
        for p in 1..=5 {
            for (comp, f) in build_s2p(p, SizeCap::DEFAULT).unwrap().terms() {
                assert!(f.is_laurent(), "f_{p}{comp:?} = {f}");
            }
        }
    }

    #[test]
    fn trailing_term_of_pp() {
        for p in 2..=6u32 {
            let f = f_coefficient(p, &comp(&[p, p]));
            let (low, _) = f.extreme_terms().unwrap().unwrap();
            let fact = Rational::from_integer(factorial(p - 1));
            assert_eq!(low.degree, -2 * (p as i64 - 1));
            assert_eq!(low.coeff, fact.pow(4), "p = {p}");
        }
    }

    #[test]
    fn all_twos_top_term() {
        for p in 1..=8u32 {
            let f = f_coefficient(p, &Composition::repeated(2, p as usize));
            assert_eq!(f, all_twos_coefficient(p));
            let (_, high) = f.extreme_terms().unwrap().unwrap();
            assert_eq!((high.degree, high.coeff), (p as i64, Rational::one()));
        }
    }
}
