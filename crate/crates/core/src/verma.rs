//! Verma modules `V(h, c)` over the Virasoro algebra.
//!
//! Vectors are stored in the PBW basis `e_{i_1} ... e_{i_s} v` with
//! `i_1 >= ... >= i_s >= 1`. Left multiplication by a generator is computed
//! by straightening: the new generator is commuted rightwards through the
//! monomial with
//!
//! ```text
//! [e_i, e_j] = (j - i) e_{i+j} + (j^3 - j)/12 * delta_{i+j,0} * z
//! ```
//!
//! until it either lands in order, turns into `e_0` (eigenvalue `h + level`)
//! or reaches `v` with a negative index (annihilated).

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;
use std::sync::Arc;

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::arith::{Rational, Scalar};
use crate::error::{Error, Result};

/// PBW monomial `e_{i_1} ... e_{i_s} v` with weakly decreasing indices.
/// The empty monomial is the highest-weight vector `v`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    /// Highest-weight vector `v`.
    pub fn vacuum() -> Self {
        Monomial(Vec::new())
    }

    /// Returns `None` unless the indices are positive and weakly decreasing.
    pub fn new(indices: Vec<u32>) -> Option<Self> {
        let ordered = indices.windows(2).all(|w| w[0] >= w[1]);
        let positive = indices.iter().all(|&i| i >= 1);
        (ordered && positive).then_some(Monomial(indices))
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn level(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_vacuum(&self) -> bool {
        self.0.is_empty()
    }

    fn prepend(first: u32, rest: &[u32]) -> Self {
        let mut indices = Vec::with_capacity(rest.len() + 1);
        indices.push(first);
        indices.extend_from_slice(rest);
        Monomial(indices)
    }

    /// Every PBW monomial of the given level (the partitions of `level`).
    pub fn all_of_level(level: u32) -> Vec<Monomial> {
        fn go(remaining: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if remaining == 0 {
                out.push(Monomial(prefix.clone()));
                return;
            }
            for part in (1..=remaining.min(max_part)).rev() {
                prefix.push(part);
                go(remaining - part, part, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        go(level, level, &mut Vec::new(), &mut out);
        out.sort();
        out
    }
}

/// Graded reverse lexicographic order: by level, then by comparing index
/// sequences from the right, smaller index first. Within a level `e_1^n v`
/// comes first and `e_n v` last.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.level()
            .cmp(&other.level())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `e5.e3.e1.v`
impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in &self.0 {
            write!(f, "e{i}.")?;
        }
        f.write_str("v")
    }
}

/// Highest weight `h` and central charge `c` of a Verma module.
#[derive(Clone, PartialEq, Debug)]
pub struct ModuleParams<F> {
    pub h: F,
    pub c: F,
}

impl<F: Scalar> ModuleParams<F> {
    pub fn new(h: F, c: F) -> Self {
        ModuleParams { h, c }
    }
}

/// Integer combination of PBW monomials, sorted by monomial.
type IntCombination = Rc<[(Monomial, i128)]>;

thread_local! {
    static RAISE_CACHE: RefCell<HashMap<(u32, Monomial), IntCombination>> =
        RefCell::new(HashMap::new());
}

/// `e_k * m` for `k >= 1`. Only positive generators are involved, so the
/// result has integer coefficients and does not depend on `(h, c)`.
fn raise(k: u32, m: &Monomial) -> IntCombination {
    let indices = m.indices();
    if indices.first().is_none_or(|&first| k >= first) {
        return Rc::from(vec![(Monomial::prepend(k, indices), 1)]);
    }
    let key = (k, m.clone());
    if let Some(hit) = RAISE_CACHE.with(|cache| cache.borrow().get(&key).cloned()) {
        return hit;
    }

    // e_k e_i R = e_i (e_k R) + (i - k) e_{k+i} R, with k < i
    let first = indices[0];
    let rest = Monomial(indices[1..].to_vec());
    let mut acc: HashMap<Monomial, i128> = HashMap::new();
    for (inner, c) in raise(k, &rest).iter() {
        for (outer, d) in raise(first, inner).iter() {
            *acc.entry(outer.clone()).or_insert(0) += c * d;
        }
    }
    *acc.entry(Monomial::prepend(k + first, rest.indices())).or_insert(0) += (first - k) as i128;

    let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
    terms.sort_by(|a, b| a.0.cmp(&b.0));
    let result: IntCombination = Rc::from(terms);
    RAISE_CACHE.with(|cache| cache.borrow_mut().insert(key, result.clone()));
    result
}

/// PBW normal form of `e_{w_1} ... e_{w_s} m` for a positive word, with
/// integer coefficients.
pub fn straighten_word(word: &[u32], m: &Monomial) -> Vec<(Monomial, i128)> {
    assert!(word.iter().all(|&i| i >= 1), "positive word expected");
    let mut current: BTreeMap<Monomial, i128> = BTreeMap::from([(m.clone(), 1)]);
    for &k in word.iter().rev() {
        let mut next: BTreeMap<Monomial, i128> = BTreeMap::new();
        for (mono, c) in &current {
            for (image, d) in raise(k, mono).iter() {
                *next.entry(image.clone()).or_insert(0) += c * d;
            }
        }
        next.retain(|_, c| *c != 0);
        current = next;
    }
    current.into_iter().collect()
}

/// Per-call memo for generators of arbitrary sign acting on monomials.
struct Action<'a, F> {
    params: &'a ModuleParams<F>,
    memo: HashMap<(i32, Monomial), Rc<BTreeMap<Monomial, F>>>,
}

impl<'a, F: Scalar> Action<'a, F> {
    fn new(params: &'a ModuleParams<F>) -> Self {
        Action {
            params,
            memo: HashMap::new(),
        }
    }

    fn apply(&mut self, k: i32, m: &Monomial) -> Rc<BTreeMap<Monomial, F>> {
        if k > 0 {
            return Rc::new(
                raise(k as u32, m)
                    .iter()
                    .map(|(mono, n)| (mono.clone(), F::from_integer(*n)))
                    .collect(),
            );
        }
        if k == 0 {
            let eigen = self.params.h.clone() + &F::from_integer(m.level() as i128);
            let mut out = BTreeMap::new();
            if !eigen.is_zero() {
                out.insert(m.clone(), eigen);
            }
            return Rc::new(out);
        }
        let Some((&first, rest)) = m.indices().split_first() else {
            return Rc::new(BTreeMap::new());
        };
        let key = (k, m.clone());
        if let Some(hit) = self.memo.get(&key) {
            return hit.clone();
        }

        let first = first as i32;
        let rest = Monomial(rest.to_vec());
        let mut acc: BTreeMap<Monomial, F> = BTreeMap::new();

        // e_first (e_k rest)
        let inner = self.apply(k, &rest);
        for (mono, c) in inner.iter() {
            for (image, n) in raise(first as u32, mono).iter() {
                add_term(&mut acc, image, &c.scale(*n));
            }
        }
        // (first - k) e_{k+first} rest
        let bracket = self.apply(k + first, &rest);
        for (mono, c) in bracket.iter() {
            add_term(&mut acc, mono, &c.scale((first - k) as i128));
        }
        // central term when k + first = 0
        if k + first == 0 {
            let j = first as i64;
            let cocycle = F::from_rational(Rational::new(BigInt::from(j * j * j - j), BigInt::from(12)));
            add_term(&mut acc, &rest, &(cocycle * &self.params.c));
        }

        let result = Rc::new(acc);
        self.memo.insert(key, result.clone());
        result
    }
}

fn add_term<F: Scalar>(acc: &mut BTreeMap<Monomial, F>, mono: &Monomial, c: &F) {
    if c.is_zero() {
        return;
    }
    match acc.get_mut(mono) {
        Some(existing) => {
            *existing += c;
            if existing.is_zero() {
                acc.remove(mono);
            }
        }
        None => {
            acc.insert(mono.clone(), c.clone());
        }
    }
}

/// A vector of `V(h, c)`: finite combination of PBW monomials with nonzero
/// coefficients.
#[derive(Clone, Debug)]
pub struct VermaElement<F> {
    params: Arc<ModuleParams<F>>,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Scalar> PartialEq for VermaElement<F> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && *self.params == *other.params
    }
}

impl<F: Scalar> VermaElement<F> {
    pub fn zero(params: Arc<ModuleParams<F>>) -> Self {
        VermaElement {
            params,
            terms: BTreeMap::new(),
        }
    }

    /// The highest-weight vector `v`.
    pub fn vacuum(params: Arc<ModuleParams<F>>) -> Self {
        Self::monomial(params, Monomial::vacuum(), F::one())
    }

    pub fn monomial(params: Arc<ModuleParams<F>>, m: Monomial, coeff: F) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(m, coeff);
        }
        VermaElement { params, terms }
    }

    /// Builds an element from possibly repeated, possibly zero terms.
    pub fn from_terms(params: Arc<ModuleParams<F>>, terms: impl IntoIterator<Item = (Monomial, F)>) -> Self {
        let mut acc = BTreeMap::new();
        for (m, c) in terms {
            add_term(&mut acc, &m, &c);
        }
        VermaElement { params, terms: acc }
    }

    pub fn params(&self) -> &Arc<ModuleParams<F>> {
        &self.params
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, F> {
        &self.terms
    }

    pub fn coeff(&self, m: &Monomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common level of all terms; `None` for the zero vector.
    pub fn grade(&self) -> Result<Option<u32>> {
        let mut levels = self.terms.keys().map(Monomial::level);
        let Some(first) = levels.next() else {
            return Ok(None);
        };
        match levels.find(|&l| l != first) {
            Some(second) => Err(Error::Inhomogeneous { first, second }),
            None => Ok(Some(first)),
        }
    }

    /// Left multiplication by `e_k`, re-expressed in the PBW basis.
    pub fn apply_generator(&self, k: i32) -> Self {
        let mut action = Action::new(&self.params);
        let mut acc = BTreeMap::new();
        for (m, c) in &self.terms {
            for (image, d) in action.apply(k, m).iter() {
                add_term(&mut acc, image, &(c.clone() * d));
            }
        }
        VermaElement {
            params: self.params.clone(),
            terms: acc,
        }
    }

    /// Action of the central element `z`, i.e. multiplication by `c`.
    pub fn apply_central(&self) -> Self {
        self.scale(&self.params.c.clone())
    }

    /// `e_{w_1} ... e_{w_s}` applied to `self` for a positive word.
    pub fn apply_word(&self, word: &[u32]) -> Self {
        let mut acc = BTreeMap::new();
        for (m, c) in &self.terms {
            for (image, n) in straighten_word(word, m) {
                add_term(&mut acc, &image, &c.scale(n));
            }
        }
        VermaElement {
            params: self.params.clone(),
            terms: acc,
        }
    }

    pub fn scale(&self, by: &F) -> Self {
        if by.is_zero() {
            return Self::zero(self.params.clone());
        }
        VermaElement {
            params: self.params.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.clone() * by)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert!(*self.params == *other.params, "adding vectors of different modules");
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            add_term(&mut terms, m, c);
        }
        VermaElement {
            params: self.params.clone(),
            terms,
        }
    }

    /// `self += by * other`, in place.
    pub fn add_scaled(&mut self, other: &Self, by: &F) {
        debug_assert!(*self.params == *other.params, "adding vectors of different modules");
        if by.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            add_term(&mut self.terms, m, &(c.clone() * by));
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-F::one()))
    }

    /// Applies `f` to every coefficient and to the module parameters.
    pub fn try_map<G: Scalar>(
        &self,
        params: Arc<ModuleParams<G>>,
        mut f: impl FnMut(&Monomial, &F) -> Result<G>,
    ) -> Result<VermaElement<G>> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            terms.push((m.clone(), f(m, c)?));
        }
        Ok(VermaElement::from_terms(params, terms))
    }

    /// `[{"monomial": [...], "coeff": ...}, ...]` in monomial order.
    pub fn to_json(&self) -> Value {
        self.terms
            .iter()
            .map(|(m, c)| json!({ "monomial": m.indices(), "coeff": c.to_json() }))
            .collect()
    }
}

/// PBW normal form of `e_{w_1} ... e_{w_s} v`.
pub fn word_to_element<F: Scalar>(word: &[u32], params: Arc<ModuleParams<F>>) -> VermaElement<F> {
    VermaElement::vacuum(params).apply_word(word)
}

impl<F: Scalar> fmt::Display for VermaElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if c.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "({c})*{m}")?;
            }
        }
        Ok(())
    }
}
