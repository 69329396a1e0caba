//! Singular vectors of Virasoro Verma modules.
//!
//! Elements of `U(L_1)` are written as [`CompositionSum`]s: linear
//! combinations of words `e_{i_1} ... e_{i_s}` over *ordered* compositions
//! of a fixed level. Two closed-form families are provided,
//! [`build_sp1`] for `S_{p,1}(t)` and [`build_s2p`] for `S_{2,p}(t)`, plus
//! the `t -> 1/t` swap giving `S_{1,q}` and `S_{p,2}`, and an independent
//! recursive construction of `S_{2,p}(t) v` in [`recursion`].

mod families;
pub mod recursion;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::arith::{Rational, RationalFunction, Scalar};
use crate::error::{Error, Result};
use crate::verma::{ModuleParams, Monomial, VermaElement};

pub use families::{all_twos_coefficient, bsa_coefficient, build_s2p, build_sp1, f_coefficient};
pub use recursion::{normalize_w, recursion_vectors, recursion_w, w_leading_coefficient};

/// Largest composition total the engine will enumerate (`2^(n-1)` words).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SizeCap(pub u32);

impl SizeCap {
    pub const DEFAULT: SizeCap = SizeCap(20);

    pub fn check(self, requested: u32) -> Result<()> {
        if requested > self.0 {
            return Err(Error::SizeCapExceeded { requested, cap: self.0 });
        }
        Ok(())
    }
}

impl Default for SizeCap {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Ordered sequence of positive parts. Ordering is lexicographic, which is
/// also the enumeration order of [`compositions`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Composition(Vec<u32>);

impl Composition {
    pub fn new(parts: Vec<u32>) -> Option<Self> {
        (!parts.is_empty() && parts.iter().all(|&p| p >= 1)).then_some(Composition(parts))
    }

    /// `(v, v, ..., v)` with `count` parts.
    pub fn repeated(value: u32, count: usize) -> Self {
        Composition(vec![value; count])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Partial sums `i_1, i_1 + i_2, ...` excluding the full total.
    pub fn proper_prefix_sums(&self) -> impl Iterator<Item = u32> + '_ {
        self.0[..self.0.len() - 1].iter().scan(0, |acc, &p| {
            *acc += p;
            Some(*acc)
        })
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<String> = self.0.iter().map(|i| format!("e{i}")).collect();
        f.write_str(&words.join("."))
    }
}

/// All `2^(n-1)` compositions of `n`, in lexicographic order.
pub fn compositions(n: u32, cap: SizeCap) -> Result<Vec<Composition>> {
    assert!(n >= 1, "compositions of a positive integer");
    cap.check(n)?;
    fn go(remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<Composition>) {
        if remaining == 0 {
            out.push(Composition(prefix.clone()));
            return;
        }
        for first in 1..=remaining {
            prefix.push(first);
            go(remaining - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::with_capacity(1 << (n - 1));
    go(n, &mut Vec::new(), &mut out);
    Ok(out)
}

/// Element of `U(L_1)` expanded over ordered compositions of `total`.
///
/// Equality of two sums as operators holds only after normal ordering;
/// the derived `PartialEq` compares expansions term by term.
#[derive(Clone, Debug, PartialEq)]
pub struct CompositionSum<F> {
    total: u32,
    terms: BTreeMap<Composition, F>,
}

impl<F: Scalar> CompositionSum<F> {
    /// Drops zero coefficients. Panics if a composition does not sum to `total`.
    pub fn new(total: u32, terms: impl IntoIterator<Item = (Composition, F)>) -> Self {
        let mut map = BTreeMap::new();
        for (comp, coeff) in terms {
            assert_eq!(comp.total(), total, "composition {comp} does not sum to {total}");
            if coeff.is_zero() {
                continue;
            }
            match map.get_mut(&comp) {
                None => {
                    map.insert(comp, coeff);
                }
                Some(existing) => {
                    *existing += &coeff;
                    if existing.is_zero() {
                        map.remove(&comp);
                    }
                }
            }
        }
        CompositionSum { total, terms: map }
    }

    pub fn total(&self) -> u32 {
        self.total
    }

    pub fn terms(&self) -> &BTreeMap<Composition, F> {
        &self.terms
    }

    pub fn coeff(&self, comp: &Composition) -> F {
        self.terms.get(comp).cloned().unwrap_or_else(F::zero)
    }

    pub fn try_map<G: Scalar>(&self, mut f: impl FnMut(&Composition, &F) -> Result<G>) -> Result<CompositionSum<G>> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (comp, c) in &self.terms {
            terms.push((comp.clone(), f(comp, c)?));
        }
        Ok(CompositionSum::new(self.total, terms))
    }

    /// `{"total": n, "terms": [{"word": [...], "coeff": ...}, ...]}`
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(comp, c)| json!({ "word": comp.parts(), "coeff": c.to_json() }))
            .collect();
        json!({ "total": self.total, "terms": terms })
    }
}

/// One term per line: `coeff  e1.e2.e1`.
impl<F: Scalar> fmt::Display for CompositionSum<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (comp, c) in &self.terms {
            writeln!(f, "{comp}  {c}")?;
        }
        Ok(())
    }
}

/// The pair `(p, q)` labelling a Kac-curve singular vector at level `pq`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KacLabel {
    pub p: u32,
    pub q: u32,
}

impl KacLabel {
    pub fn new(p: u32, q: u32) -> Self {
        assert!(p >= 1 && q >= 1, "Kac labels are positive");
        KacLabel { p, q }
    }

    pub fn level(self) -> u32 {
        self.p * self.q
    }
}

impl fmt::Display for KacLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S_{{{},{}}}", self.p, self.q)
    }
}

/// `c(t) = 13 + 6t + 6/t`
pub fn central_charge() -> RationalFunction {
    let q = |n: i64| Rational::from_integer(n.into());
    RationalFunction::laurent_monomial(q(6), -1)
        + RationalFunction::constant(q(13))
        + RationalFunction::laurent_monomial(q(6), 1)
}

/// `(h_{p,q}(t), c(t))` with
/// `h_{p,q}(t) = (1 - p^2)/4 t + (1 - pq)/2 + (1 - q^2)/4 t^{-1}`.
pub fn kac_params(label: KacLabel) -> ModuleParams<RationalFunction> {
    let (p, q) = (label.p as i64, label.q as i64);
    let r = |n: i64, d: i64| Rational::new(n.into(), d.into());
    let h = RationalFunction::laurent_monomial(r(1 - p * p, 4), 1)
        + RationalFunction::constant(r(1 - p * q, 2))
        + RationalFunction::laurent_monomial(r(1 - q * q, 4), -1);
    ModuleParams::new(h, central_charge())
}

/// Substitutes `t -> 1/t` in every coefficient, turning `S_{p,q}` into `S_{q,p}`.
pub fn swap_t(sum: &CompositionSum<RationalFunction>) -> Result<CompositionSum<RationalFunction>> {
    sum.try_map(|_, c| {
        c.laurent_terms()?;
        Ok(c.invert_variable())
    })
}

/// Evaluates every coefficient at `t = at`.
pub fn specialize(sum: &CompositionSum<RationalFunction>, at: &Rational) -> Result<CompositionSum<Rational>> {
    sum.try_map(|comp, c| {
        c.evaluate_at(at).map_err(|err| match err {
            Error::PoleAtEvaluationPoint { point, .. } => Error::PoleAtEvaluationPoint {
                point,
                composition: Some(comp.parts().to_vec()),
            },
            other => other,
        })
    })
}

/// `sum` acting on `x` from the left.
pub fn apply_sum<F: Scalar>(sum: &CompositionSum<F>, x: &VermaElement<F>) -> VermaElement<F> {
    let mut contributions: BTreeMap<Monomial, Vec<F>> = BTreeMap::new();
    for (comp, coeff) in sum.terms() {
        for (m, c) in x.apply_word(comp.parts()).terms() {
            contributions.entry(m.clone()).or_default().push(c.clone() * coeff);
        }
    }
    VermaElement::from_terms(
        x.params().clone(),
        contributions.into_iter().map(|(m, cs)| (m, F::sum_all(cs))),
    )
}

/// `apply_sum(sum, v)` in the module with the given parameters.
pub fn apply_to_vacuum<F: Scalar>(sum: &CompositionSum<F>, params: ModuleParams<F>) -> VermaElement<F> {
    apply_sum(sum, &VermaElement::vacuum(Arc::new(params)))
}

/// True when `e_k x = 0`.
pub fn annihilated_by<F: Scalar>(x: &VermaElement<F>, k: i32) -> bool {
    x.apply_generator(-k).is_zero()
}

/// A nonzero homogeneous vector is singular iff `e_{-1}` and `e_{-2}` kill it;
/// the negative part of the algebra is generated by those two.
pub fn is_singular<F: Scalar>(x: &VermaElement<F>) -> Result<bool> {
    if x.grade()?.is_none() {
        return Ok(false);
    }
    Ok(annihilated_by(x, 1) && annihilated_by(x, 2))
}

/// Coefficient of the pure `e_1` monomial, the normalization convention.
pub(crate) fn pure_e1_coefficient<F: Scalar>(x: &VermaElement<F>) -> Result<F> {
    let level = x.grade()?.unwrap_or(0);
    let m = Monomial::new(vec![1; level as usize]).expect("valid monomial");
    Ok(x.coeff(&m))
}

/// Rescales so that the pure `e_1^n` coefficient is one.
pub fn normalize_leading<F: Scalar>(x: &VermaElement<F>) -> Result<VermaElement<F>> {
    let lead = pure_e1_coefficient(x)?;
    if lead.is_zero() {
        return Err(Error::NormalizationFailure);
    }
    if lead.is_one() {
        return Ok(x.clone());
    }
    Ok(x.scale(&F::one().checked_div(&lead)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;
    use num_traits::{One, Zero};

    type Rf = RationalFunction;

    fn comp(parts: &[u32]) -> Composition {
        Composition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn composition_enumeration() {
        let cap = SizeCap::DEFAULT;
        assert_eq!(compositions(1, cap).unwrap(), vec![comp(&[1])]);
        assert_eq!(
            compositions(3, cap).unwrap(),
            vec![comp(&[1, 1, 1]), comp(&[1, 2]), comp(&[2, 1]), comp(&[3])]
        );
        assert_eq!(compositions(5, cap).unwrap().len(), 16);
        for n in 1..=12 {
            let all = compositions(n, cap).unwrap();
            assert_eq!(all.len(), 1 << (n - 1));
            assert!(all.windows(2).all(|w| w[0] < w[1]));
            assert!(all.iter().all(|c| c.total() == n));
        }
        assert_eq!(
            compositions(21, cap),
            Err(Error::SizeCapExceeded { requested: 21, cap: 20 })
        );
        assert!(compositions(6, SizeCap(5)).is_err());
    }

    #[test]
    fn kac_examples() {
        let t = Rf::t;
        let params = kac_params(KacLabel::new(2, 1));
        let expected = t() * &Rf::from(rational(-3, 4)) + &Rf::from(rational(-1, 2));
        assert_eq!(params.h, expected);
        assert!(kac_params(KacLabel::new(1, 1)).h.is_zero());
        assert_eq!(central_charge().evaluate_at(&rational(-3, 2)).unwrap(), rational(0, 1));
        // h_{1,2}(-3/2) = 0 and h_{1,4}(-3/2) = 1 give V(0,0) and V(1,0)
        let at = rational(-3, 2);
        assert_eq!(
            kac_params(KacLabel::new(1, 2)).h.evaluate_at(&at).unwrap(),
            rational(0, 1)
        );
        assert_eq!(
            kac_params(KacLabel::new(1, 4)).h.evaluate_at(&at).unwrap(),
            rational(1, 1)
        );
    }

    #[test]
    fn swap_is_an_involution() {
        let s21 = build_sp1(2, SizeCap::DEFAULT).unwrap();
        let s12 = swap_t(&s21).unwrap();
        assert_eq!(s12.coeff(&comp(&[1, 1])), Rf::one());
        assert_eq!(s12.coeff(&comp(&[2])), Rf::t().inv().unwrap());
        assert_eq!(swap_t(&s12).unwrap(), s21);
        let constant = CompositionSum::new(2, [(comp(&[1, 1]), Rf::from(3)), (comp(&[2]), Rf::from(-1))]);
        assert_eq!(swap_t(&constant).unwrap(), constant);
        let non_laurent = CompositionSum::new(1, [(comp(&[1]), (Rf::t() + &Rf::one()).inv().unwrap())]);
        assert!(matches!(swap_t(&non_laurent), Err(Error::NotLaurent { .. })));
    }

    #[test]
    fn specialization() {
        let s21 = build_sp1(2, SizeCap::DEFAULT).unwrap();
        let at = rational(-3, 2);
        let special = specialize(&s21, &at).unwrap();
        assert_eq!(special.coeff(&comp(&[1, 1])), rational(1, 1));
        assert_eq!(special.coeff(&comp(&[2])), rational(-3, 2));
        let s12 = swap_t(&s21).unwrap();
        let err = specialize(&s12, &rational(0, 1)).unwrap_err();
        assert_eq!(
            err,
            Error::PoleAtEvaluationPoint {
                point: "0".into(),
                composition: Some(vec![2])
            }
        );
    }

    #[test]
    fn apply_sum_examples() {
        let cap = SizeCap::DEFAULT;
        let params = Arc::new(kac_params(KacLabel::new(2, 1)));
        let v = VermaElement::vacuum(params.clone());
        let e1v = VermaElement::monomial(params.clone(), Monomial::new(vec![1]).unwrap(), Rf::one());
        assert_eq!(apply_sum(&build_sp1(1, cap).unwrap(), &v), e1v);
        let w2 = apply_sum(&build_sp1(2, cap).unwrap(), &v);
        let expected = VermaElement::from_terms(
            params.clone(),
            [
                (Monomial::new(vec![1, 1]).unwrap(), Rf::one()),
                (Monomial::new(vec![2]).unwrap(), Rf::t()),
            ],
        );
        assert_eq!(w2, expected);
        assert!(apply_sum(&build_sp1(3, cap).unwrap(), &VermaElement::zero(params)).is_zero());
    }

    #[test]
    fn level_one_singularity_depends_on_h() {
        let singular_at = |h: i64| {
            let params = Arc::new(ModuleParams::new(Rf::from(h), Rf::t()));
            let x = VermaElement::monomial(params, Monomial::new(vec![1]).unwrap(), Rf::one());
            is_singular(&x).unwrap()
        };
        assert!(singular_at(0));
        assert!(!singular_at(1));
    }

    #[test]
    fn singularity_requires_homogeneous_nonzero_input() {
        let params = Arc::new(ModuleParams::new(Rf::zero(), Rf::zero()));
        let mixed = VermaElement::from_terms(
            params.clone(),
            [
                (Monomial::new(vec![1]).unwrap(), Rf::one()),
                (Monomial::new(vec![2]).unwrap(), Rf::one()),
            ],
        );
        assert!(matches!(is_singular(&mixed), Err(Error::Inhomogeneous { .. })));
        assert_eq!(is_singular(&VermaElement::zero(params)), Ok(false));
    }

    #[test]
    fn composition_sum_json() {
        let s = build_sp1(2, SizeCap::DEFAULT).unwrap();
        assert_eq!(
            s.to_json(),
            json!({"total": 2, "terms": [
                {"word": [1, 1], "coeff": {"num": ["1"], "den": ["1"]}},
                {"word": [2], "coeff": {"num": ["0", "1"], "den": ["1"]}}
            ]})
        );
    }

    fn vector(sum: &CompositionSum<Rf>, label: KacLabel) -> VermaElement<Rf> {
        apply_to_vacuum(sum, kac_params(label))
    }

    #[test]
    fn swapped_families_are_singular() {
        let cap = SizeCap::DEFAULT;
        for q in 1..=8 {
            let s1q = swap_t(&build_sp1(q, cap).unwrap()).unwrap();
            assert!(is_singular(&vector(&s1q, KacLabel::new(1, q))).unwrap(), "S_{{1,{q}}}");
        }
        for p in 1..=5 {
            let sp2 = swap_t(&build_s2p(p, cap).unwrap()).unwrap();
            assert!(is_singular(&vector(&sp2, KacLabel::new(p, 2))).unwrap(), "S_{{{p},2}}");
        }
    }

    #[test]
    fn third_lowering_operator_also_annihilates() {
        let cap = SizeCap::DEFAULT;
        for p in 1..=4 {
            assert!(annihilated_by(
                &vector(&build_sp1(p, cap).unwrap(), KacLabel::new(p, 1)),
                3
            ));
            let x = vector(&build_s2p(p, cap).unwrap(), KacLabel::new(2, p));
            assert!(annihilated_by(&x, 3), "p = {p}");
        }
    }

    #[test]
    fn normal_ordered_pp_trailing_term() {
        for p in 2..=5u32 {
            let x = vector(&build_s2p(p, SizeCap::DEFAULT).unwrap(), KacLabel::new(2, p));
            let coeff = x.coeff(&Monomial::new(vec![p, p]).unwrap());
            let (low, _) = coeff.extreme_terms().unwrap().unwrap();
            let fact = Rational::from_integer(crate::arith::factorial(p - 1));
            assert_eq!((low.degree, low.coeff), (-2 * (p as i64 - 1), fact.pow(4)), "p = {p}");
        }
    }

    proptest::proptest! {
        #[test]
        fn specialization_commutes_with_action(n in -9i64..=9, d in 1i64..=7, p in 1u32..=3) {
            proptest::prop_assume!(n != 0);
            let at = rational(n, d);
            let label = KacLabel::new(2, p);
            let sum = build_s2p(p, SizeCap::DEFAULT).unwrap();
            let params = kac_params(label);
            let numeric_params = Arc::new(ModuleParams::new(
                params.h.evaluate_at(&at).unwrap(),
                params.c.evaluate_at(&at).unwrap(),
            ));
            let symbolic = vector(&sum, label)
                .try_map(numeric_params.clone(), |_, c| c.evaluate_at(&at))
                .unwrap();
            let numeric = apply_sum(&specialize(&sum, &at).unwrap(), &VermaElement::vacuum(numeric_params));
            proptest::prop_assert_eq!(symbolic.terms(), numeric.terms());
            proptest::prop_assert!(is_singular(&numeric).unwrap());
        }
    }
}
