//! The free resolution of the trivial `L_1`-module built from singular
//! vectors of `V(0, 0)` at `t = -3/2`, and the induced cochain complexes of
//! graded modules whose homogeneous components are one-dimensional.
//!
//! Generators of the `k`-th term sit at the pentagonal levels
//! `(3k^2 - k)/2` and `(3k^2 + k)/2`. The differential `delta_{k+1}` is a
//! 2x2 matrix of the operators `S_{p,q}(-3/2)`; on a graded module with
//! `e_i f_j = a(i, j) f_{i+j}` each operator acts by a scalar
//! `sigma_{p,q}(j)`, so the cochain complex becomes a chain of small
//! numerical matrices `D_k`.

mod action;
mod identities;
mod linalg;

use std::collections::HashMap;
use std::ops::RangeInclusive;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::Zero;
use serde_json::{json, Value};

use crate::arith::{rational, Rational, RationalFunction};
use crate::error::{Error, Result};
use crate::singular::{build_s2p, build_sp1, specialize, swap_t, CompositionSum, KacLabel, SizeCap};

pub use action::{GradedAction, Support};
pub use identities::{verify_resolution_identities, IdentityCheck, ResolutionReport, SingularCheck, IDENTITY_NAMES};
pub use linalg::Matrix;

/// `t = -3/2`, where `c(t) = 0` and `h_{1,1}(t) = 0`.
pub fn resolution_point() -> Rational {
    rational(-3, 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Minus,
    Plus,
}

/// `(3k^2 - k)/2` or `(3k^2 + k)/2`.
pub fn pentagonal(k: u32, sign: Sign) -> i64 {
    let k = k as i64;
    match sign {
        Sign::Minus => (3 * k * k - k) / 2,
        Sign::Plus => (3 * k * k + k) / 2,
    }
}

/// Levels of the generators of the `k`-th module of the resolution.
pub fn generator_levels(k: u32) -> Vec<i64> {
    if k == 0 {
        vec![0]
    } else {
        vec![pentagonal(k, Sign::Minus), pentagonal(k, Sign::Plus)]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeltaEntry {
    pub label: KacLabel,
    pub negated: bool,
}

/// `delta_k`, rows indexed by the generators of term `k - 1` and columns
/// by those of term `k`:
///
/// ```text
/// delta_1     = (S_{1,1}, S_{1,2})
/// delta_{k+1} = [[ S_{1,3k+1},   S_{2k+1,2}  ],
///                [ -S_{2k+1,1}, -S_{1,3k+2}  ]]
/// ```
pub fn delta_entries(k: u32) -> Vec<Vec<DeltaEntry>> {
    assert!(k >= 1, "delta_k is defined for k >= 1");
    let e = |p, q, negated| DeltaEntry {
        label: KacLabel::new(p, q),
        negated,
    };
    if k == 1 {
        return vec![vec![e(1, 1, false), e(1, 2, false)]];
    }
    let m = k - 1;
    vec![
        vec![e(1, 3 * m + 1, false), e(2 * m + 1, 2, false)],
        vec![e(2 * m + 1, 1, true), e(1, 3 * m + 2, true)],
    ]
}

/// `S_{p,q}(t)` from whichever closed family covers the label.
pub fn build_spq(label: KacLabel, cap: SizeCap) -> Result<CompositionSum<RationalFunction>> {
    let KacLabel { p, q } = label;
    if q == 1 {
        build_sp1(p, cap)
    } else if p == 1 {
        swap_t(&build_sp1(q, cap)?)
    } else if p == 2 {
        build_s2p(q, cap)
    } else if q == 2 {
        swap_t(&build_s2p(p, cap)?)
    } else {
        Err(Error::UnsupportedLabel { p, q })
    }
}

fn check_label(label: KacLabel) -> Result<()> {
    if label.p.min(label.q) > 2 {
        return Err(Error::UnsupportedLabel { p: label.p, q: label.q });
    }
    Ok(())
}

type SpecializedCache = HashMap<(KacLabel, Rational), Arc<CompositionSum<Rational>>>;

fn specialized_cache() -> &'static Mutex<SpecializedCache> {
    static CACHE: OnceLock<Mutex<SpecializedCache>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `S_{p,q}(t0)` with rational coefficients. Results are memoized.
pub fn build_spq_at(label: KacLabel, t0: &Rational, cap: SizeCap) -> Result<Arc<CompositionSum<Rational>>> {
    check_label(label)?;
    cap.check(label.level())?;
    let key = (label, t0.clone());
    if let Some(hit) = specialized_cache().lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let value = Arc::new(specialize(&build_spq(label, cap)?, t0)?);
    specialized_cache().lock().unwrap().insert(key, value.clone());
    Ok(value)
}

/// `sigma_{p,q}(j)`: the scalar with `S_{p,q}(t0) f_j = sigma f_{j + pq}`.
pub fn sigma(label: KacLabel, j: i64, action: &GradedAction, t0: &Rational, cap: SizeCap) -> Result<Rational> {
    check_label(label)?;
    let support = action.support();
    if action.is_zero_action() || !support.contains(j) || !support.contains(j + label.level() as i64) {
        return Ok(Rational::zero());
    }
    let sum = build_spq_at(label, t0, cap)?;
    let mut total = Rational::zero();
    for (comp, coeff) in sum.terms() {
        let mut value = coeff.clone();
        let mut position = j;
        for &i in comp.parts().iter().rev() {
            value *= action.a(i, position);
            if value.is_zero() {
                break;
            }
            position += i as i64;
        }
        total += value;
    }
    Ok(total)
}

/// `D_k : C^k_s -> C^{k+1}_s` at `t = -3/2`. Columns follow the generators of
/// term `k`, rows those of term `k + 1`; the entry linking source level `n`
/// to target level `n'` is `+-sigma_{p,q}(s + n)` with `pq = n' - n`.
pub fn d_matrix(k: u32, s: i64, action: &GradedAction, cap: SizeCap) -> Result<Matrix> {
    let t0 = resolution_point();
    let delta = delta_entries(k + 1);
    let sources = generator_levels(k);
    let targets = generator_levels(k + 1);
    let mut rows = Vec::with_capacity(targets.len());
    for target in 0..targets.len() {
        let mut row = Vec::with_capacity(sources.len());
        for (links, &level) in delta.iter().zip(&sources) {
            let entry = links[target];
            let value = sigma(entry.label, s + level, action, &t0, cap)?;
            row.push(if entry.negated { -value } else { value });
        }
        rows.push(row);
    }
    Ok(Matrix::from_rows(rows))
}

fn first_cochain_failure(matrices: &[Matrix]) -> Option<usize> {
    matrices.windows(2).position(|pair| !pair[1].mul(&pair[0]).is_zero())
}

/// True iff `D_{k+1} D_k = 0` for `0 <= k < k_max`.
pub fn verify_cochain(action: &GradedAction, s: i64, k_max: u32, cap: SizeCap) -> Result<bool> {
    let matrices = (0..=k_max)
        .map(|k| d_matrix(k, s, action, cap))
        .collect::<Result<Vec<_>>>()?;
    Ok(first_cochain_failure(&matrices).is_none())
}

/// Dimension of `C^k_s`: generator levels `n` with `f_{s+n}` in the support.
fn cochain_dim(k: u32, s: i64, action: &GradedAction) -> usize {
    generator_levels(k)
        .into_iter()
        .filter(|n| action.support().contains(s + n))
        .count()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyDegree {
    pub k: u32,
    pub dim: usize,
    /// Generator levels carrying the classes; filled in when no differential
    /// touches degree `k`, so that `H^k` is all of `C^k_s`.
    pub gradings: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CohomologyTable {
    pub module: Value,
    pub s: i64,
    pub dims: Vec<CohomologyDegree>,
}

impl CohomologyTable {
    pub fn dim(&self, k: u32) -> Option<usize> {
        self.dims.iter().find(|d| d.k == k).map(|d| d.dim)
    }

    pub fn to_json(&self) -> Value {
        let dims: Vec<Value> = self
            .dims
            .iter()
            .map(|d| json!({ "k": d.k, "dim": d.dim, "gradings": d.gradings }))
            .collect();
        json!({ "module": self.module, "s": self.s, "dims": dims })
    }
}

/// `dim H^k_s` for `0 <= k < k_max`, after checking the cochain property on
/// the matrices involved.
pub fn cohomology_dims(action: &GradedAction, s: i64, k_max: u32, cap: SizeCap) -> Result<CohomologyTable> {
    let matrices = (0..k_max)
        .map(|k| d_matrix(k, s, action, cap))
        .collect::<Result<Vec<_>>>()?;
    if let Some(k) = first_cochain_failure(&matrices) {
        return Err(Error::CochainViolation { k: k as u32, s });
    }
    let ranks: Vec<usize> = matrices.iter().map(Matrix::rank).collect();
    let mut dims = Vec::with_capacity(k_max as usize);
    for k in 0..k_max {
        let outgoing = ranks[k as usize];
        let incoming = if k == 0 { 0 } else { ranks[k as usize - 1] };
        let dim = cochain_dim(k, s, action) - outgoing - incoming;
        let gradings = if outgoing == 0 && incoming == 0 {
            generator_levels(k)
                .into_iter()
                .filter(|n| action.support().contains(s + n))
                .collect()
        } else {
            Vec::new()
        };
        dims.push(CohomologyDegree { k, dim, gradings });
    }
    Ok(CohomologyTable {
        module: action.descriptor(),
        s,
        dims,
    })
}

/// Tables for every `s` in the range; an empty range yields no tables.
pub fn cohomology_window(
    action: &GradedAction,
    s_range: RangeInclusive<i64>,
    k_max: u32,
    cap: SizeCap,
) -> Result<Vec<CohomologyTable>> {
    s_range.map(|s| cohomology_dims(action, s, k_max, cap)).collect()
}

/// Per-degree totals over a window of internal gradings, gradings merged.
pub fn summed_cohomology(tables: &[CohomologyTable], k_max: u32) -> Vec<CohomologyDegree> {
    (0..k_max)
        .map(|k| {
            let mut dim = 0;
            let mut gradings = Vec::new();
            for d in tables.iter().flat_map(|t| t.dims.iter()).filter(|d| d.k == k) {
                dim += d.dim;
                gradings.extend_from_slice(&d.gradings);
            }
            gradings.sort_unstable();
            gradings.dedup();
            CohomologyDegree { k, dim, gradings }
        })
        .collect()
}
