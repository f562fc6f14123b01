//! Littlewood–Richardson coefficients and tensor / skew decompositions of
//! Schur functors, for rational GL(r) weights.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use dashmap::DashMap;
use num_bigint::BigUint;
use num_traits::One;
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grcore::{contains, subdiagrams, Diagram};

/// A dominant weight of GL(rank): exactly `rank` weakly decreasing integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GlWeight {
    parts: Vec<i64>,
}

impl GlWeight {
    pub fn new(parts: Vec<i64>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotDecreasing(parts));
        }
        Ok(GlWeight { parts })
    }

    pub fn from_diagram(d: &Diagram, rank: usize) -> Result<Self> {
        Ok(GlWeight { parts: d.padded(rank)? })
    }

    pub fn zero(rank: usize) -> Self {
        GlWeight { parts: vec![0; rank] }
    }

    pub fn rank(&self) -> usize {
        self.parts.len()
    }

    pub fn parts(&self) -> &[i64] {
        &self.parts
    }

    pub fn to_diagram(&self) -> Diagram {
        Diagram::new(self.parts.clone()).expect("weight is decreasing")
    }

    /// Adds `t` to every entry (tensoring with det^t).
    pub fn twist(&self, t: i64) -> GlWeight {
        GlWeight { parts: self.parts.iter().map(|p| p + t).collect() }
    }

    /// Highest weight of the dual representation: negate and reverse.
    pub fn dual(&self) -> GlWeight {
        GlWeight { parts: self.parts.iter().rev().map(|p| -p).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(|&p| p == 0)
    }

    pub fn dim(&self) -> BigUint {
        dim_gl(&self.parts)
    }
}

impl fmt::Display for GlWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.parts)
    }
}

impl fmt::Debug for GlWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.parts)
    }
}

pub fn dual_weight(a: &GlWeight) -> GlWeight {
    a.dual()
}

/// Weyl dimension formula: Π_{i<j} (a_i − a_j + j − i) / (j − i).
pub fn dim_gl(parts: &[i64]) -> BigUint {
    let r = parts.len();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..r {
        for j in i + 1..r {
            let gap = (j - i) as i64;
            num *= BigUint::from((parts[i] - parts[j] + gap) as u64);
            den *= BigUint::from(gap as u64);
        }
    }
    num / den
}

/// Multiset of GL(rank) weights.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightSum {
    pub rank: usize,
    pub terms: BTreeMap<Vec<i64>, u64>,
}

impl WeightSum {
    pub fn get(&self, w: &[i64]) -> u64 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> BigUint {
        self.terms.iter().map(|(w, &m)| dim_gl(w) * BigUint::from(m)).sum()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Enumerates LR tableaux by adding the content of `beta` one letter at a time,
/// each letter forming a horizontal strip, subject to the lattice-word condition.
struct LrFill<'a> {
    beta: &'a [i64],
    rows: usize,
    bound: Option<&'a [i64]>,
    out: BTreeMap<Vec<i64>, u64>,
}

impl LrFill<'_> {
    fn letter(&mut self, j: usize, shape: &[i64], prev_counts: &[i64]) {
        if j == self.beta.len() {
            *self.out.entry(shape.to_vec()).or_insert(0) += 1;
            return;
        }
        let mut new_shape = shape.to_vec();
        let mut counts = vec![0; self.rows];
        self.row(j, 0, self.beta[j], shape, prev_counts, &mut new_shape, &mut counts, 0, 0);
    }

    #[allow(clippy::too_many_arguments)]
    fn row(
        &mut self,
        j: usize,
        i: usize,
        remaining: i64,
        old: &[i64],
        prev_counts: &[i64],
        new: &mut Vec<i64>,
        counts: &mut Vec<i64>,
        placed: i64,
        prev_above: i64,
    ) {
        if remaining == 0 {
            let (n, c) = (new.clone(), counts.clone());
            self.letter(j + 1, &n, &c);
            return;
        }
        if i == self.rows {
            return;
        }
        let mut cap = remaining;
        if i > 0 {
            cap = cap.min(old[i - 1] - old[i]);
        }
        if let Some(b) = self.bound {
            cap = cap.min(b[i] - old[i]);
        }
        if j > 0 {
            // letters j+1 in rows ≤ i must not outnumber letters j in rows < i
            cap = cap.min(prev_above - placed);
        }
        if cap < 0 {
            return;
        }
        for x in 0..=cap {
            new[i] = old[i] + x;
            counts[i] = x;
            let above = prev_above + prev_counts.get(i).copied().unwrap_or(0);
            self.row(j, i + 1, remaining - x, old, prev_counts, new, counts, placed + x, above);
        }
        new[i] = old[i];
        counts[i] = 0;
    }
}

fn lr_fill(alpha: &[i64], beta: &[i64], rows: usize, bound: Option<&[i64]>) -> BTreeMap<Vec<i64>, u64> {
    let alpha_len = alpha.iter().filter(|&&p| p != 0).count();
    let beta_len = beta.iter().filter(|&&p| p != 0).count();
    if alpha_len > rows || beta_len > rows {
        return BTreeMap::new();
    }
    let mut shape = alpha.to_vec();
    shape.resize(rows, 0);
    let beta = &beta[..beta_len];
    let mut fill = LrFill { beta, rows, bound, out: BTreeMap::new() };
    fill.letter(0, &shape, &vec![0; rows]);
    fill.out
}

pub type ProductKey = (Vec<i64>, Vec<i64>, usize);
/// Weights of a truncated product with their multiplicities.
pub type ProductTerms = Vec<(Vec<i64>, u64)>;
static PRODUCTS: Lazy<DashMap<ProductKey, Arc<ProductTerms>>> = Lazy::new(DashMap::new);

/// s_α · s_β truncated to at most `rows` rows, for partitions α, β; memoized.
pub fn partition_product(alpha: &[i64], beta: &[i64], rows: usize) -> Arc<ProductTerms> {
    let trim = |v: &[i64]| -> Vec<i64> {
        let mut v = v.to_vec();
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    };
    let (mut a, mut b) = (trim(alpha), trim(beta));
    // fill with the smaller content
    if (b.iter().sum::<i64>(), &b) > (a.iter().sum::<i64>(), &a) {
        std::mem::swap(&mut a, &mut b);
    }
    let key = (a, b, rows);
    if let Some(v) = PRODUCTS.get(&key) {
        return v.clone();
    }
    let result: ProductTerms = lr_fill(&key.0, &key.1, rows, None).into_iter().collect();
    let result = Arc::new(result);
    PRODUCTS.entry(key).or_insert(result).clone()
}

/// Snapshot of the product memo, for persistence.
pub fn product_memo_entries() -> Vec<(ProductKey, ProductTerms)> {
    let mut v: Vec<_> = PRODUCTS.iter().map(|e| (e.key().clone(), e.value().as_ref().clone())).collect();
    v.sort();
    v
}

/// Seeds the product memo. Entries are only inserted when absent.
pub fn product_memo_insert(key: ProductKey, val: ProductTerms) {
    PRODUCTS.entry(key).or_insert_with(|| Arc::new(val));
}

pub fn clear_product_memo() {
    PRODUCTS.clear();
}

/// m^γ_{α,β} for partitions; zero unless |γ| = |α| + |β| and α, β ⊆ γ.
pub fn lr_coefficient(alpha: &Diagram, beta: &Diagram, gamma: &Diagram) -> u64 {
    if !(alpha.is_partition() && beta.is_partition() && gamma.is_partition()) {
        return 0;
    }
    if gamma.size() != alpha.size() + beta.size() || !contains(gamma, alpha) || !contains(gamma, beta) {
        return 0;
    }
    let rows = gamma.len();
    let fills = lr_fill(alpha.parts(), beta.parts(), rows, Some(gamma.parts()));
    fills.get(&gamma.padded(rows).expect("partition")).copied().unwrap_or(0)
}

/// Σ^a ⊗ Σ^b for GL(r), via determinant twists down to partitions and back.
pub fn tensor_decompose(a: &GlWeight, b: &GlWeight) -> Result<WeightSum> {
    if a.rank() != b.rank() {
        return Err(Error::RankMismatch(a.rank(), b.rank()));
    }
    let r = a.rank();
    if r == 0 {
        let mut terms = BTreeMap::new();
        terms.insert(Vec::new(), 1);
        return Ok(WeightSum { rank: 0, terms });
    }
    let ma = a.parts[r - 1];
    let mb = b.parts[r - 1];
    let ap: Vec<i64> = a.parts.iter().map(|p| p - ma).collect();
    let bp: Vec<i64> = b.parts.iter().map(|p| p - mb).collect();
    let mut terms = BTreeMap::new();
    for (shape, m) in partition_product(&ap, &bp, r).iter() {
        let w: Vec<i64> = shape.iter().map(|p| p + ma + mb).collect();
        *terms.entry(w).or_insert(0) += m;
    }
    Ok(WeightSum { rank: r, terms })
}

/// Σ^{β/α} = ⊕ m^β_{α,γ} Σ^γ. Keys are padded to `len(β)`.
pub fn skew_expand(beta: &Diagram, alpha: &Diagram) -> Result<WeightSum> {
    if !beta.is_partition() || !alpha.is_partition() || !contains(beta, alpha) {
        return Err(Error::NotContained { inner: alpha.to_string(), outer: beta.to_string() });
    }
    let rank = beta.len();
    let target = beta.size() - alpha.size();
    let mut terms = BTreeMap::new();
    for gamma in subdiagrams(beta).into_iter().filter(|g| g.size() == target) {
        let m = lr_coefficient(alpha, &gamma, beta);
        if m > 0 {
            terms.insert(gamma.padded(rank)?, m);
        }
    }
    Ok(WeightSum { rank, terms })
}
