use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::{rational_to_json, Rational, Scalar, UniPoly};
use crate::error::{Error, Result};

/// Element of Q(t) in canonical form: `num / den` with `gcd(num, den) = 1`
/// and `den` monic. Zero is `0 / 1`. Canonical form makes structural
/// equality coincide with field equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: UniPoly,
    den: UniPoly,
}

/// One term `coeff * t^degree` of a Laurent polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentTerm {
    pub degree: i64,
    pub coeff: Rational,
}

impl RationalFunction {
    pub fn new(num: UniPoly, den: UniPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    /// Canonicalizes a fraction whose denominator is known to be nonzero.
    fn reduce(num: UniPoly, den: UniPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (num, den) = if den.degree() == Some(0) {
            (num, den)
        } else {
            let g = UniPoly::gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_rem(&g).0, den.div_rem(&g).0)
            }
        };
        Self::with_monic_den(num, den)
    }

    fn with_monic_den(num: UniPoly, den: UniPoly) -> Self {
        let lc = den.leading().expect("nonzero denominator").clone();
        if lc.is_one() {
            RationalFunction { num, den }
        } else {
            let inv = lc.recip();
            RationalFunction {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn from_poly(num: UniPoly) -> Self {
        RationalFunction {
            num,
            den: UniPoly::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(UniPoly::constant(c))
    }

    /// The indeterminate `t`.
    pub fn t() -> Self {
        Self::from_poly(UniPoly::t())
    }

    /// `c * t^exponent` for any integer exponent.
    pub fn laurent_monomial(c: Rational, exponent: i64) -> Self {
        let power = UniPoly::monomial(Rational::one(), exponent.unsigned_abs() as usize);
        if exponent >= 0 {
            Self::from_poly(UniPoly::monomial(c, exponent as usize))
        } else {
            Self::reduce(UniPoly::constant(c), power)
        }
    }

    /// `a + b*t`
    pub fn linear(a: Rational, b: Rational) -> Self {
        Self::from_poly(UniPoly::linear(a, b))
    }

    pub fn numerator(&self) -> &UniPoly {
        &self.num
    }

    pub fn denominator(&self) -> &UniPoly {
        &self.den
    }

    /// `Some(c)` when the value does not depend on `t`.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.num.is_zero() {
            return Some(Rational::zero());
        }
        (self.num.degree() == Some(0) && self.den.is_one()).then(|| self.num.coeffs()[0].clone())
    }

    pub fn inv(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::with_monic_den(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    /// `self^n`
    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| acc * self)
    }

    /// Exact value at `t = at`.
    pub fn evaluate_at(&self, at: &Rational) -> Result<Rational> {
        let d = self.den.eval(at);
        if d.is_zero() {
            return Err(Error::PoleAtEvaluationPoint {
                point: at.to_string(),
                composition: None,
            });
        }
        Ok(self.num.eval(at) / d)
    }

    /// The substitution `t -> 1/t`, renormalized.
    pub fn invert_variable(&self) -> Self {
        if self.num.is_zero() {
            return Self::zero();
        }
        let n = self.num.degree().unwrap() as i64;
        let m = self.den.degree().unwrap() as i64;
        let num = self.num.reversed();
        let den = self.den.reversed();
        let shift = m - n;
        let (num, den) = if shift >= 0 {
            (&num * &UniPoly::monomial(Rational::one(), shift as usize), den)
        } else {
            (num, &den * &UniPoly::monomial(Rational::one(), (-shift) as usize))
        };
        Self::reduce(num, den)
    }

    /// Exponent `m` when the denominator is `t^m` (it is monic, so no unit
    /// factor survives canonicalization).
    fn laurent_shift(&self) -> Result<usize> {
        match self.den.as_monomial() {
            Some((m, _)) => Ok(m),
            None => Err(Error::NotLaurent {
                denominator: self.den.to_string(),
            }),
        }
    }

    pub fn is_laurent(&self) -> bool {
        self.laurent_shift().is_ok()
    }

    /// Nonzero terms of a Laurent polynomial, ascending in degree.
    pub fn laurent_terms(&self) -> Result<Vec<LaurentTerm>> {
        let shift = self.laurent_shift()? as i64;
        Ok(self
            .num
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| LaurentTerm {
                degree: i as i64 - shift,
                coeff: c.clone(),
            })
            .collect())
    }

    /// Lowest- and highest-degree terms of a Laurent polynomial. The zero
    /// function has no terms and yields `None`.
    pub fn extreme_terms(&self) -> Result<Option<(LaurentTerm, LaurentTerm)>> {
        let terms = self.laurent_terms()?;
        Ok(match (terms.first(), terms.last()) {
            (Some(low), Some(high)) => Some((low.clone(), high.clone())),
            _ => None,
        })
    }

    /// `{"num": [...], "den": [...]}` with ascending coefficient strings.
    pub fn to_json(&self) -> Value {
        let side = |p: &UniPoly| -> Value { p.coeffs().iter().map(rational_to_json).collect() };
        json!({ "num": side(&self.num), "den": side(&self.den) })
    }
}

impl Zero for RationalFunction {
    fn zero() -> Self {
        RationalFunction {
            num: UniPoly::zero(),
            den: UniPoly::one(),
        }
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RationalFunction {
    fn one() -> Self {
        Self::from_poly(UniPoly::one())
    }
}

impl Add<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;

    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RationalFunction::reduce(&self.num + &rhs.num, self.den.clone());
        }
        let g = UniPoly::gcd(&self.den, &rhs.den);
        if g.is_one() {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            return RationalFunction::with_monic_den(num, &self.den * &rhs.den);
        }
        let left_cof = self.den.div_rem(&g).0;
        let right_cof = rhs.den.div_rem(&g).0;
        let num = &(&self.num * &right_cof) + &(&rhs.num * &left_cof);
        if num.is_zero() {
            return RationalFunction::zero();
        }
        // Only factors of g can be shared between num and the new denominator.
        let h = UniPoly::gcd(&num, &g);
        let num = num.div_rem(&h).0;
        let g = g.div_rem(&h).0;
        RationalFunction::with_monic_den(num, &(&left_cof * &right_cof) * &g)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;

    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Sub<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;

    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;

    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero();
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale_rational(&c);
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale_rational(&c);
        }
        let cancel = |num: &UniPoly, den: &UniPoly| -> (UniPoly, UniPoly) {
            if den.degree() == Some(0) {
                return (num.clone(), den.clone());
            }
            let g = UniPoly::gcd(num, den);
            if g.is_one() {
                (num.clone(), den.clone())
            } else {
                (num.div_rem(&g).0, den.div_rem(&g).0)
            }
        };
        let (a, d) = cancel(&self.num, &rhs.den);
        let (c, b) = cancel(&rhs.num, &self.den);
        RationalFunction::with_monic_den(&a * &c, &b * &d)
    }
}

impl RationalFunction {
    fn scale_rational(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }
}

impl Div<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;

    /// Panics on division by zero; see [`RationalFunction::checked_div`].
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self.checked_div(rhs).expect("division by zero in Q(t)")
    }
}

macro_rules! forward_owned_ops {
    ($($trait:ident $method:ident),*) => {$(
        impl $trait<RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: &'a RationalFunction) -> RationalFunction {
                (&self).$method(rhs)
            }
        }
    )*};
}

forward_owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for RationalFunction {
    type Output = RationalFunction;

    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl<'a> AddAssign<&'a RationalFunction> for RationalFunction {
    fn add_assign(&mut self, rhs: &'a RationalFunction) {
        *self = &*self + rhs;
    }
}

impl<'a> SubAssign<&'a RationalFunction> for RationalFunction {
    fn sub_assign(&mut self, rhs: &'a RationalFunction) {
        *self = &*self - rhs;
    }
}

impl<'a> MulAssign<&'a RationalFunction> for RationalFunction {
    fn mul_assign(&mut self, rhs: &'a RationalFunction) {
        *self = &*self * rhs;
    }
}

impl From<Rational> for RationalFunction {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

impl From<i64> for RationalFunction {
    fn from(n: i64) -> Self {
        Self::constant(Rational::from_integer(BigInt::from(n)))
    }
}

impl RationalFunction {
    /// Adds many values at once: numerators sharing a denominator are summed
    /// as polynomials first, so only one reduction per distinct denominator
    /// is paid.
    pub fn sum_many(values: Vec<RationalFunction>) -> RationalFunction {
        let mut groups: Vec<(UniPoly, UniPoly)> = Vec::new();
        let mut index: HashMap<UniPoly, usize> = HashMap::new();
        for v in values {
            if v.is_zero() {
                continue;
            }
            match index.get(&v.den) {
                Some(&i) => groups[i].0 = &groups[i].0 + &v.num,
                None => {
                    index.insert(v.den.clone(), groups.len());
                    groups.push((v.num, v.den));
                }
            }
        }
        groups
            .into_iter()
            .map(|(num, den)| Self::reduce(num, den))
            .fold(Self::zero(), |acc, v| acc + &v)
    }
}

impl Scalar for RationalFunction {
    fn from_integer(n: i128) -> Self {
        Self::constant(Rational::from_integer(BigInt::from(n)))
    }

    fn from_rational(q: Rational) -> Self {
        Self::constant(q)
    }

    fn checked_div(&self, other: &Self) -> Result<Self> {
        RationalFunction::checked_div(self, other)
    }

    fn scale(&self, n: i128) -> Self {
        self.scale_rational(&Rational::from_integer(BigInt::from(n)))
    }

    fn sum_all(values: Vec<Self>) -> Self {
        Self::sum_many(values)
    }

    fn to_json(&self) -> Value {
        RationalFunction::to_json(self)
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &UniPoly| {
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;
    use proptest::prelude::*;

    fn poly(cs: &[i64]) -> UniPoly {
        UniPoly::from_coeffs(cs.iter().map(|&c| rational(c, 1)).collect())
    }

    fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
        RationalFunction::new(poly(num), poly(den)).unwrap()
    }

    fn t() -> RationalFunction {
        RationalFunction::t()
    }

    #[test]
    fn field_examples() {
        assert_eq!(&t() + &t(), rf(&[0, 2], &[1]));
        assert_eq!(&t().inv().unwrap() * &t(), RationalFunction::one());
        // (t^2 - 1)/t divided by (t + 1) is (t - 1)/t
        let lhs = rf(&[-1, 0, 1], &[0, 1]);
        let quotient = lhs.checked_div(&rf(&[1, 1], &[1])).unwrap();
        assert_eq!(quotient, rf(&[-1, 1], &[0, 1]));
        // cross-multiplication oracle
        assert_eq!(&quotient * &rf(&[1, 1], &[1]), lhs);
    }

    #[test]
    fn division_by_zero_is_reported() {
        assert_eq!(t().checked_div(&RationalFunction::zero()), Err(Error::DivisionByZero));
        assert_eq!(
            RationalFunction::new(poly(&[1]), UniPoly::zero()),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn canonical_denominator_is_monic() {
        let f = rf(&[2, 2], &[4, 4, 0]);
        assert_eq!(f, RationalFunction::from(1) / rf(&[2], &[1]));
        assert!(f.denominator().is_one());
        let g = rf(&[3], &[0, 2]);
        assert_eq!(g.denominator(), &poly(&[0, 1]));
        assert_eq!(g.numerator(), &UniPoly::constant(rational(3, 2)));
    }

    #[test]
    fn evaluation() {
        // c(t) = 13 + 6t + 6/t vanishes at t = -3/2
        let c = rf(&[6, 13, 6], &[0, 1]);
        assert_eq!(c.evaluate_at(&rational(-3, 2)).unwrap(), rational(0, 1));
        assert_eq!(c.evaluate_at(&rational(-2, 3)).unwrap(), rational(0, 1));
        assert_eq!(t().evaluate_at(&rational(0, 1)).unwrap(), rational(0, 1));
        assert!(matches!(
            t().inv().unwrap().evaluate_at(&rational(0, 1)),
            Err(Error::PoleAtEvaluationPoint { .. })
        ));
    }

    #[test]
    fn extreme_terms_examples() {
        // t^2 - 4 + 3/t
        let f = rf(&[3, -4, 0, 1], &[0, 1]);
        let (low, high) = f.extreme_terms().unwrap().unwrap();
        assert_eq!((low.degree, low.coeff), (-1, rational(3, 1)));
        assert_eq!((high.degree, high.coeff), (2, rational(1, 1)));
        // (t^2 - 1)^2 / t^2
        let g = rf(&[1, 0, -2, 0, 1], &[0, 0, 1]);
        let (low, high) = g.extreme_terms().unwrap().unwrap();
        assert_eq!((low.degree, low.coeff), (-2, rational(1, 1)));
        assert_eq!((high.degree, high.coeff), (2, rational(1, 1)));
        assert!(matches!(
            rf(&[1], &[1, 1]).extreme_terms(),
            Err(Error::NotLaurent { .. })
        ));
        assert_eq!(RationalFunction::zero().extreme_terms().unwrap(), None);
    }

    #[test]
    fn invert_variable_examples() {
        assert_eq!(t().invert_variable(), t().inv().unwrap());
        let f = rf(&[1, 2], &[3, 0, 1]);
        assert_eq!(f.invert_variable().invert_variable(), f);
        // 1/(t+1) -> t/(t+1)
        assert_eq!(rf(&[1], &[1, 1]).invert_variable(), rf(&[0, 1], &[1, 1]));
    }

    #[test]
    fn display() {
        assert_eq!(rf(&[-1, 0, 1], &[0, 1]).to_string(), "(t^2 - 1)/t");
        assert_eq!(rf(&[0, 3], &[1]).to_string(), "3*t");
    }

    #[test]
    fn json_form() {
        let f = rf(&[1, 0, -1], &[0, 2]);
        assert_eq!(f.to_json(), json!({"num": ["1/2", "0", "-1/2"], "den": ["0", "1"]}));
    }

    fn small_poly() -> impl Strategy<Value = UniPoly> {
        prop::collection::vec(-5i64..=5, 0..4).prop_map(|cs| poly(&cs))
    }

    fn small_rf() -> impl Strategy<Value = RationalFunction> {
        (small_poly(), small_poly())
            .prop_filter("nonzero denominator", |(_, d)| !d.is_zero())
            .prop_map(|(n, d)| RationalFunction::new(n, d).unwrap())
    }

    proptest! {
        #[test]
        fn div_then_mul_round_trips(a in small_rf(), b in small_rf()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!(&a.checked_div(&b).unwrap() * &b, a);
        }

        #[test]
        fn canonical_form_is_unique(a in small_rf(), b in small_rf(), c in small_rf()) {
            // (a + b) c computed two ways
            let left = &(&a + &b) * &c;
            let right = &(&a * &c) + &(&b * &c);
            prop_assert_eq!(left, right);
            prop_assert_eq!(&(&a - &b) + &b, a);
        }

        #[test]
        fn evaluation_is_multiplicative(a in small_rf(), b in small_rf(), n in -7i64..=7, d in 1i64..=4) {
            let at = rational(n, d);
            if let (Ok(x), Ok(y)) = (a.evaluate_at(&at), b.evaluate_at(&at)) {
                prop_assert_eq!((&a * &b).evaluate_at(&at).unwrap(), x.clone() * &y);
                prop_assert_eq!((&a + &b).evaluate_at(&at).unwrap(), x + y);
            }
        }
    }
}
