//! Borel–Bott–Weil: cohomology of irreducible homogeneous bundles on
//! Grassmannians and relative direct images along Grassmannian bundles.
//!
//! A Levi weight lists its blocks quotient-most first, so on Gr(k,n) the
//! bundle (V/U)^μ ⊗ U^λ is the concatenation (μ | λ). Adding ρ = (m, …, 1)
//! gives the sequence whose repeats, inversions and sorted form decide
//! everything.

use std::fmt;

use dashmap::DashMap;
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::littlewood::GlWeight;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BbwResult {
    Vanishing,
    Cohomology { degree: usize, dominant: Vec<i64> },
}

impl BbwResult {
    pub fn is_vanishing(&self) -> bool {
        matches!(self, BbwResult::Vanishing)
    }

    pub fn degree(&self) -> Option<usize> {
        match self {
            BbwResult::Vanishing => None,
            BbwResult::Cohomology { degree, .. } => Some(*degree),
        }
    }

    pub fn to_json(&self) -> BbwJson {
        match self {
            BbwResult::Vanishing => BbwJson { vanishing: true, degree: None, dominant: None },
            BbwResult::Cohomology { degree, dominant } => {
                BbwJson { vanishing: false, degree: Some(*degree), dominant: Some(dominant.clone()) }
            }
        }
    }
}

impl fmt::Display for BbwResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BbwResult::Vanishing => write!(f, "vanishing"),
            BbwResult::Cohomology { degree, dominant } => write!(f, "H^{degree} = {dominant:?}"),
        }
    }
}

/// Wire shape `{"vanishing":bool,"degree":int,"dominant":[...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BbwJson {
    pub vanishing: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dominant: Option<Vec<i64>>,
}

impl BbwJson {
    pub fn into_result(self) -> Result<BbwResult> {
        if self.vanishing {
            return Ok(BbwResult::Vanishing);
        }
        match (self.degree, self.dominant) {
            (Some(degree), Some(dominant)) => Ok(BbwResult::Cohomology { degree, dominant }),
            _ => Err(Error::Parse("non-vanishing BBW record needs degree and dominant".into())),
        }
    }
}

/// Input is already ρ-shifted. Repeats give zero; otherwise the degree is the
/// number of pairs i < j with s_i < s_j and the weight is sort-descending minus ρ.
pub fn bbw_reduce(shifted: &[i64]) -> BbwResult {
    let m = shifted.len();
    let mut sorted = shifted.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return BbwResult::Vanishing;
    }
    let mut degree = 0;
    for i in 0..m {
        for j in i + 1..m {
            if shifted[i] < shifted[j] {
                degree += 1;
            }
        }
    }
    let dominant = sorted.iter().enumerate().map(|(i, s)| s - (m - i) as i64).collect();
    BbwResult::Cohomology { degree, dominant }
}

pub fn rho_shift(weight: &[i64]) -> Vec<i64> {
    let m = weight.len();
    weight.iter().enumerate().map(|(i, w)| w + (m - i) as i64).collect()
}

static BBW_MEMO: Lazy<DashMap<Vec<i64>, BbwResult>> = Lazy::new(DashMap::new);

/// BBW of a concatenated (unshifted) weight; memoized.
pub fn bbw_weight(weight: &[i64]) -> BbwResult {
    if let Some(r) = BBW_MEMO.get(weight) {
        return r.clone();
    }
    let r = bbw_reduce(&rho_shift(weight));
    BBW_MEMO.entry(weight.to_vec()).or_insert(r).clone()
}

pub fn bbw_memo_entries() -> Vec<(Vec<i64>, BbwResult)> {
    let mut v: Vec<_> = BBW_MEMO.iter().map(|e| (e.key().clone(), e.value().clone())).collect();
    v.sort_by(|a, b| a.0.cmp(&b.0));
    v
}

pub fn bbw_memo_insert(key: Vec<i64>, val: BbwResult) {
    BBW_MEMO.entry(key).or_insert(val);
}

pub fn clear_bbw_memo() {
    BBW_MEMO.clear();
}

/// Weights on the blocks of a Levi subgroup, quotient-most block first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LeviWeight {
    pub blocks: Vec<GlWeight>,
}

impl LeviWeight {
    pub fn new(blocks: Vec<GlWeight>) -> Self {
        LeviWeight { blocks }
    }

    pub fn total_rank(&self) -> usize {
        self.blocks.iter().map(GlWeight::rank).sum()
    }

    pub fn concatenated(&self) -> Vec<i64> {
        self.blocks.iter().flat_map(|b| b.parts().iter().copied()).collect()
    }

    fn check_ranks(&self, expected: &[usize]) -> Result<()> {
        let found: Vec<usize> = self.blocks.iter().map(GlWeight::rank).collect();
        if found != expected {
            return Err(Error::BlockSize { expected: expected.to_vec(), found });
        }
        Ok(())
    }
}

/// H^•(Gr(k,n), (V/U)^μ ⊗ U^λ) for `b = (μ | λ)`.
pub fn cohomology_gr(k: usize, n: usize, b: &LeviWeight) -> Result<BbwResult> {
    b.check_ranks(&[n - k, k])?;
    Ok(bbw_weight(&b.concatenated()))
}

/// Relative BBW for a Grassmannian bundle whose fibre merges `inner` blocks into
/// one bundle of rank `m`: either zero, or R^d of the push-forward is Σ^ν of the merged bundle.
/// Blocks pulled back from the base are unaffected (projection formula) and are not passed here.
pub fn push_inner(ranks: &[usize], inner: &LeviWeight) -> Result<BbwResult> {
    inner.check_ranks(ranks)?;
    Ok(bbw_weight(&inner.concatenated()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::littlewood::dim_gl;
    use num_bigint::BigUint;

    fn w(v: &[i64]) -> GlWeight {
        GlWeight::new(v.to_vec()).unwrap()
    }

    /// Inversion-count oracle straight from the definition.
    fn inversions(s: &[i64]) -> usize {
        let mut c = 0;
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                if s[i] < s[j] {
                    c += 1;
                }
            }
        }
        c
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(bbw_reduce(&[4, 3, 2, 1]), BbwResult::Cohomology { degree: 0, dominant: vec![0, 0, 0, 0] });
        assert_eq!(bbw_reduce(&[4, 3, 3, 1]), BbwResult::Vanishing);
        assert_eq!(inversions(&[4, 3, 6, 5]), 4);
        assert_eq!(bbw_reduce(&[4, 3, 6, 5]), BbwResult::Cohomology { degree: 4, dominant: vec![2, 2, 2, 2] });
    }

    #[test]
    fn gr_examples() {
        let o1 = LeviWeight::new(vec![w(&[0, 0]), w(&[-1, -1])]);
        let r = cohomology_gr(2, 4, &o1).unwrap();
        assert_eq!(r, BbwResult::Cohomology { degree: 0, dominant: vec![0, 0, -1, -1] });
        if let BbwResult::Cohomology { dominant, .. } = r {
            assert_eq!(dim_gl(&dominant), BigUint::from(6u32));
        }
        let u = LeviWeight::new(vec![w(&[0, 0]), w(&[1, 0])]);
        assert_eq!(cohomology_gr(2, 4, &u).unwrap(), BbwResult::Vanishing);
        for (k, n) in [(1, 3), (2, 5), (3, 6)] {
            let z = LeviWeight::new(vec![GlWeight::zero(n - k), GlWeight::zero(k)]);
            assert_eq!(cohomology_gr(k, n, &z).unwrap(), BbwResult::Cohomology { degree: 0, dominant: vec![0; n] });
        }
        let bad = LeviWeight::new(vec![w(&[0]), w(&[0, 0])]);
        assert!(matches!(cohomology_gr(2, 4, &bad), Err(Error::BlockSize { .. })));
    }

    #[test]
    fn push_examples() {
        let trivial = LeviWeight::new(vec![w(&[0]), w(&[0])]);
        assert_eq!(push_inner(&[1, 1], &trivial).unwrap(), BbwResult::Cohomology { degree: 0, dominant: vec![0, 0] });
        let b = LeviWeight::new(vec![w(&[1]), w(&[0, 0])]);
        assert_eq!(push_inner(&[1, 2], &b).unwrap(), BbwResult::Cohomology { degree: 0, dominant: vec![1, 0, 0] });
        let b = LeviWeight::new(vec![w(&[-1]), w(&[0])]);
        assert_eq!(push_inner(&[1, 1], &b).unwrap(), BbwResult::Vanishing);
    }

    #[test]
    fn json_shape() {
        let j = serde_json::to_string(&bbw_reduce(&[4, 3, 6, 5]).to_json()).unwrap();
        assert_eq!(j, r#"{"vanishing":false,"degree":4,"dominant":[2,2,2,2]}"#);
        let j = serde_json::to_string(&BbwResult::Vanishing.to_json()).unwrap();
        assert_eq!(j, r#"{"vanishing":true}"#);
    }
}
