//! Young diagrams as GL dominant weights: boxes, the binary path codec,
//! cyclic shifts, twists and band cuts.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A weakly decreasing integer sequence. Parts may be zero or negative.
///
/// Trailing zeros are trimmed, so `[2,1,0]` and `[2,1]` are the same value.
/// A fixed length, when needed, comes from context (see [`Diagram::padded`]).
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Diagram(Vec<i64>);

impl Diagram {
    pub fn new(parts: Vec<i64>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotDecreasing(parts));
        }
        let mut parts = parts;
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Diagram(parts))
    }

    pub fn empty() -> Self {
        Diagram(Vec::new())
    }

    pub fn parts(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of boxes (sum of parts).
    pub fn size(&self) -> i64 {
        self.0.iter().sum()
    }

    /// The i-th part (0-based), zero past the end.
    pub fn part(&self, i: usize) -> i64 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn first(&self) -> i64 {
        self.part(0)
    }

    pub fn is_partition(&self) -> bool {
        self.0.last().is_none_or(|&p| p >= 0)
    }

    /// The parts extended by zeros to exactly `rows` entries.
    pub fn padded(&self, rows: usize) -> Result<Vec<i64>> {
        if self.len() > rows || (self.len() < rows && !self.is_partition()) {
            return Err(Error::RankOverflow { weight: self.to_string(), rank: rows });
        }
        let mut v = self.0.clone();
        v.resize(rows, 0);
        Ok(v)
    }

    pub fn fits(&self, bx: BoxSpec) -> bool {
        self.is_partition() && self.len() <= bx.h && self.first() <= bx.w as i64
    }

    fn check_fits(&self, bx: BoxSpec) -> Result<()> {
        if self.fits(bx) {
            Ok(())
        } else {
            Err(Error::OutOfBox { diagram: self.to_string(), w: bx.w, h: bx.h })
        }
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Largest absolute value accepted for a part or twist read from text.
pub const MAX_ENTRY: i64 = 1 << 24;

/// Reads an integer entry bounded by [`MAX_ENTRY`].
pub fn parse_entry(tok: &str, what: &str) -> Result<i64> {
    let v = tok
        .trim()
        .parse::<i64>()
        .map_err(|e| Error::Parse(format!("bad {what} {tok:?}: {e}")))?;
    if v.unsigned_abs() > MAX_ENTRY as u64 {
        return Err(Error::Parse(format!("{what} {v} exceeds magnitude {MAX_ENTRY}")));
    }
    Ok(v)
}

/// Parses `"[4,4,2]"`, `"[]"`; whitespace around tokens is ignored.
pub fn parse_parts(s: &str) -> Result<Vec<i64>> {
    let t = s.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("expected [..], got {t:?}")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|tok| parse_entry(tok, "part"))
        .collect()
}

impl FromStr for Diagram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Diagram::new(parse_parts(s)?)
    }
}

impl Serialize for Diagram {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Diagram {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<i64>::deserialize(d)?;
        if let Some(p) = v.iter().find(|p| p.unsigned_abs() > MAX_ENTRY as u64) {
            return Err(serde::de::Error::custom(format!("part {p} exceeds magnitude {MAX_ENTRY}")));
        }
        Diagram::new(v).map_err(serde::de::Error::custom)
    }
}

/// Shorthand used throughout tests and internal code for known-good literals.
#[macro_export]
macro_rules! dg {
    () => { $crate::grcore::Diagram::empty() };
    ($($x:expr),+ $(,)?) => {
        $crate::grcore::Diagram::new(vec![$($x as i64),+]).expect("literal diagram")
    };
}

/// A `w` x `h` rectangle (width, height).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoxSpec {
    pub w: usize,
    pub h: usize,
}

impl BoxSpec {
    pub fn new(w: usize, h: usize) -> Self {
        BoxSpec { w, h }
    }
}

/// `b ⊆ a`: every part of `b` is at most the matching part of `a` (missing parts are zero).
pub fn contains(a: &Diagram, b: &Diagram) -> bool {
    let len = a.len().max(b.len());
    (0..len).all(|i| b.part(i) <= a.part(i))
}

/// Graded-lexicographic comparison: by size, then larger parts first.
pub fn graded_lex_cmp(a: &Diagram, b: &Diagram) -> Ordering {
    a.size().cmp(&b.size()).then_with(|| {
        let len = a.len().max(b.len());
        for i in 0..len {
            match b.part(i).cmp(&a.part(i)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    })
}

/// All diagrams in the box, in graded-lexicographic order.
pub fn enumerate_box(bx: BoxSpec) -> Vec<Diagram> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(bx.h);
    fill_box(bx.w as i64, bx.h, &mut cur, &mut out);
    out.sort_by(graded_lex_cmp);
    out
}

fn fill_box(max: i64, rows_left: usize, cur: &mut Vec<i64>, out: &mut Vec<Diagram>) {
    if rows_left == 0 {
        out.push(Diagram::new(cur.clone()).expect("decreasing by construction"));
        return;
    }
    for p in 0..=max {
        cur.push(p);
        fill_box(p, rows_left - 1, cur, out);
        cur.pop();
    }
}

/// All partitions contained in `outer`, in graded-lexicographic order.
pub fn subdiagrams(outer: &Diagram) -> Vec<Diagram> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    sub_fill(outer.parts(), 0, i64::MAX, &mut cur, &mut out);
    out.sort_by(graded_lex_cmp);
    out
}

fn sub_fill(outer: &[i64], row: usize, prev: i64, cur: &mut Vec<i64>, out: &mut Vec<Diagram>) {
    if row == outer.len() {
        out.push(Diagram::new(cur.clone()).expect("decreasing by construction"));
        return;
    }
    for p in 0..=outer[row].min(prev) {
        cur.push(p);
        sub_fill(outer, row + 1, p, cur, out);
        cur.pop();
    }
}

/// A binary word of length `w + h` with exactly `h` ones; `bits[0]` is a₁.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitWord {
    bits: Vec<u8>,
}

impl BitWord {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::Parse("bit word entries must be 0 or 1".into()));
        }
        Ok(BitWord { bits })
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    /// One application of `a₁…a_N ↦ a_N a₁…a_{N−1}`, `steps` times (negative rotates back).
    pub fn rotate(&self, steps: i64) -> BitWord {
        let n = self.bits.len();
        if n == 0 {
            return self.clone();
        }
        let s = steps.rem_euclid(n as i64) as usize;
        let mut bits = self.bits.clone();
        bits.rotate_right(s);
        BitWord { bits }
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl FromStr for BitWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Parse(format!("bad bit {c:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        BitWord::new(bits)
    }
}

/// Reads the boundary path from the lower-left corner: 0 = right step, 1 = up step.
/// The bottom row of the box holds the last part λ_h.
pub fn encode_binary(d: &Diagram, bx: BoxSpec) -> Result<BitWord> {
    d.check_fits(bx)?;
    let parts = d.padded(bx.h)?;
    let mut bits = Vec::with_capacity(bx.w + bx.h);
    let mut col = 0i64;
    for &p in parts.iter().rev() {
        bits.extend(std::iter::repeat_n(0u8, (p - col) as usize));
        bits.push(1);
        col = p;
    }
    bits.extend(std::iter::repeat_n(0u8, (bx.w as i64 - col) as usize));
    Ok(BitWord { bits })
}

pub fn decode_binary(word: &BitWord, bx: BoxSpec) -> Result<Diagram> {
    if word.bits.len() != bx.w + bx.h {
        return Err(Error::WordLength { expected: bx.w + bx.h, found: word.bits.len() });
    }
    if word.ones() != bx.h {
        return Err(Error::OnesCount { expected: bx.h, found: word.ones() });
    }
    let mut col = 0i64;
    let mut rev = Vec::with_capacity(bx.h);
    for &b in &word.bits {
        if b == 0 {
            col += 1;
        } else {
            rev.push(col);
        }
    }
    rev.reverse();
    Diagram::new(rev)
}

/// λ{steps}: the cyclic shift, computed by rotating the binary word.
pub fn cyclic_shift(d: &Diagram, bx: BoxSpec, steps: i64) -> Result<Diagram> {
    let word = encode_binary(d, bx)?;
    decode_binary(&word.rotate(steps), bx)
}

/// λ(t) on `rows` rows: every part (including padded zeros) increased by `t`.
pub fn twist(d: &Diagram, t: i64, rows: usize) -> Result<Diagram> {
    let parts = d.padded(rows)?;
    Diagram::new(parts.into_iter().map(|p| p + t).collect())
}

pub fn transpose(d: &Diagram) -> Result<Diagram> {
    if !d.is_partition() {
        return Err(Error::NegativePart(d.to_string()));
    }
    let w = d.first().max(0) as usize;
    let cols = (1..=w as i64)
        .map(|c| d.parts().iter().filter(|&&p| p >= c).count() as i64)
        .collect();
    Diagram::new(cols)
}

/// λ^{(i)} together with c_i = |λ / λ^{(i)}|.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BandCut {
    pub cut: Diagram,
    pub removed: i64,
}

fn check_max_width(d: &Diagram, bx: BoxSpec) -> Result<()> {
    d.check_fits(bx)?;
    if bx.w == 0 || d.first() != bx.w as i64 {
        return Err(Error::NotMaximalWidth { diagram: d.to_string(), w: bx.w });
    }
    Ok(())
}

/// Band cuts of a maximal-width diagram via the column (transpose) formulas.
pub fn band_cuts(d: &Diagram, bx: BoxSpec) -> Result<Vec<BandCut>> {
    check_max_width(d, bx)?;
    let w = bx.w;
    let cols = transpose(d)?.padded(w)?;
    let total = d.size();
    (1..=w)
        .map(|i| {
            let mut t = Vec::with_capacity(w);
            t.extend_from_slice(&cols[..w - i]);
            t.extend(cols[w - i + 1..].iter().map(|c| c - 1));
            t.push(0);
            let cut = transpose(&Diagram::new(t)?)?;
            let removed = total - cut.size();
            Ok(BandCut { cut, removed })
        })
        .collect()
}

/// Band cuts via the binary rule: flip the i-th zero from the right to 1, set the last bit to 0.
pub fn band_cuts_by_bits(d: &Diagram, bx: BoxSpec) -> Result<Vec<BandCut>> {
    check_max_width(d, bx)?;
    let word = encode_binary(d, bx)?;
    let zeros: Vec<usize> = (0..word.bits.len()).rev().filter(|&j| word.bits[j] == 0).collect();
    let last = word.bits.len() - 1;
    zeros
        .iter()
        .map(|&z| {
            let mut bits = word.bits.clone();
            bits[z] = 1;
            bits[last] = 0;
            let cut = decode_binary(&BitWord { bits }, bx)?;
            Ok(BandCut { removed: d.size() - cut.size(), cut })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    /// Path-reading oracle written straight from the definition: R^{λ_h} U R^{λ_{h-1}-λ_h} U … R^{w-λ_1}.
    fn path_oracle(parts: &[i64], w: i64) -> String {
        let mut s = String::new();
        let mut prev = 0;
        for &p in parts.iter().rev() {
            s.push_str(&"0".repeat((p - prev) as usize));
            s.push('1');
            prev = p;
        }
        s.push_str(&"0".repeat((w - prev) as usize));
        s
    }

    #[test]
    fn contains_examples() {
        assert!(contains(&dg![2, 1], &dg![1, 1]));
        assert!(!contains(&dg![1, 1], &dg![2]));
        assert!(contains(&dg![], &dg![]));
        assert!(matches!("[1,2]".parse::<Diagram>(), Err(Error::NotDecreasing(_))));
    }

    #[test]
    fn enumerate_box_examples() {
        let b = enumerate_box(BoxSpec::new(2, 2));
        assert_eq!(b, vec![dg![], dg![1], dg![2], dg![1, 1], dg![2, 1], dg![2, 2]]);
        assert_eq!(enumerate_box(BoxSpec::new(5, 0)), vec![dg![]]);
        assert_eq!(enumerate_box(BoxSpec::new(4, 3)).len(), 35);
        for w in 0..6 {
            for h in 0..6 {
                assert_eq!(enumerate_box(BoxSpec::new(w, h)).len() as u64, binomial((w + h) as u64, h as u64));
            }
        }
    }

    #[test]
    fn codec_examples() {
        let bx = BoxSpec::new(4, 3);
        assert_eq!(encode_binary(&dg![4, 4, 2], bx).unwrap().to_string(), path_oracle(&[4, 4, 2], 4));
        assert_eq!(encode_binary(&dg![4, 4, 2], bx).unwrap().to_string(), "0010011");
        assert_eq!(decode_binary(&"1001001".parse().unwrap(), bx).unwrap(), dg![4, 2]);
        assert_eq!(encode_binary(&dg![], BoxSpec::new(2, 2)).unwrap().to_string(), "1100");
    }

    #[test]
    fn codec_errors() {
        let bx = BoxSpec::new(2, 2);
        assert!(matches!(encode_binary(&dg![3], bx), Err(Error::OutOfBox { .. })));
        assert!(matches!(encode_binary(&dg![1, 1, 1], bx), Err(Error::OutOfBox { .. })));
        assert!(matches!(decode_binary(&"1110".parse().unwrap(), bx), Err(Error::OnesCount { .. })));
        assert!(matches!(decode_binary(&"110".parse().unwrap(), bx), Err(Error::WordLength { .. })));
        assert!("10a1".parse::<BitWord>().is_err());
    }

    #[test]
    fn codec_round_trip_small_boxes() {
        for w in 0..=12usize {
            for h in 0..=(12 - w) {
                let bx = BoxSpec::new(w, h);
                for d in enumerate_box(bx) {
                    let word = encode_binary(&d, bx).unwrap();
                    assert_eq!(word.to_string(), path_oracle(&d.padded(h).unwrap(), w as i64));
                    assert_eq!(decode_binary(&word, bx).unwrap(), d);
                }
            }
        }
    }

    /// The case formula for one shift step.
    fn shift_once_formula(d: &Diagram, bx: BoxSpec) -> Diagram {
        let parts = d.padded(bx.h).unwrap();
        if d.first() < bx.w as i64 {
            Diagram::new(parts.iter().map(|p| p + 1).collect()).unwrap()
        } else {
            let mut v = parts[1..].to_vec();
            v.push(0);
            Diagram::new(v).unwrap()
        }
    }

    #[test]
    fn shift_examples() {
        assert_eq!(cyclic_shift(&dg![4, 4, 2], BoxSpec::new(4, 3), 1).unwrap(), dg![4, 2]);
        assert_eq!(cyclic_shift(&dg![1], BoxSpec::new(2, 2), 1).unwrap(), dg![2, 1]);
        let bx = BoxSpec::new(3, 2);
        for d in enumerate_box(bx) {
            assert_eq!(cyclic_shift(&d, bx, 5).unwrap(), d);
            assert_eq!(cyclic_shift(&cyclic_shift(&d, bx, 2).unwrap(), bx, -2).unwrap(), d);
        }
    }

    #[test]
    fn shift_matches_case_formula() {
        for w in 1..=5 {
            for h in 1..=5 {
                let bx = BoxSpec::new(w, h);
                for d in enumerate_box(bx) {
                    assert_eq!(cyclic_shift(&d, bx, 1).unwrap(), shift_once_formula(&d, bx), "{d} in {bx:?}");
                }
            }
        }
    }

    #[test]
    fn twist_examples() {
        assert_eq!(twist(&dg![2, 1], 1, 2).unwrap(), dg![3, 2]);
        assert_eq!(twist(&dg![], -3, 2).unwrap().parts(), &[-3, -3]);
        let d = dg![3, 1];
        assert_eq!(twist(&twist(&d, 4, 3).unwrap(), -4, 3).unwrap(), d);
        assert!(twist(&dg![1, 1, 1], 1, 2).is_err());
    }

    #[test]
    fn transpose_examples() {
        assert_eq!(transpose(&dg![4, 4, 2]).unwrap(), dg![3, 3, 2, 2]);
        assert_eq!(transpose(&dg![]).unwrap(), dg![]);
        for d in enumerate_box(BoxSpec::new(3, 3)) {
            assert_eq!(transpose(&transpose(&d).unwrap()).unwrap(), d);
        }
        assert!(matches!(transpose(&Diagram::new(vec![0, -1]).unwrap()), Err(Error::NegativePart(_))));
    }

    #[test]
    fn band_cut_examples() {
        let cuts = band_cuts(&dg![4, 4, 2], BoxSpec::new(4, 3)).unwrap();
        let expected = [(dg![3, 3, 2], 2), (dg![3, 2, 2], 3), (dg![3, 1, 1], 5), (dg![3, 1], 6)];
        assert_eq!(cuts.len(), 4);
        for (c, (d, r)) in cuts.iter().zip(expected) {
            assert_eq!(c.cut, d);
            assert_eq!(c.removed, r);
        }
        let cuts = band_cuts(&dg![2, 1], BoxSpec::new(2, 2)).unwrap();
        assert_eq!(cuts, vec![BandCut { cut: dg![1, 1], removed: 1 }, BandCut { cut: dg![], removed: 3 }]);
        assert!(matches!(band_cuts(&dg![1, 1], BoxSpec::new(2, 2)), Err(Error::NotMaximalWidth { .. })));
    }

    #[test]
    fn band_cuts_agree_and_nest() {
        for w in 1..=5 {
            for h in 1..=5 {
                let bx = BoxSpec::new(w, h);
                for d in enumerate_box(bx).into_iter().filter(|d| d.first() == w as i64) {
                    let a = band_cuts(&d, bx).unwrap();
                    assert_eq!(a, band_cuts_by_bits(&d, bx).unwrap());
                    assert_eq!(a.len(), w);
                    let mut prev = d.clone();
                    for c in &a {
                        assert!(contains(&prev, &c.cut) && prev != c.cut);
                        prev = c.cut.clone();
                    }
                    assert!(a.windows(2).all(|p| p[0].removed < p[1].removed));
                }
            }
        }
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(dg![4, 4, 2].to_string(), "[4,4,2]");
        assert_eq!(dg![].to_string(), "[]");
        assert_eq!(" [ 3 , -1 ] ".parse::<Diagram>().unwrap().parts(), &[3, -1]);
        assert_eq!("[2,1,0,0]".parse::<Diagram>().unwrap(), dg![2, 1]);
        assert!("2,1".parse::<Diagram>().is_err());
    }

    #[test]
    fn oversized_entries_rejected() {
        assert!(format!("[{MAX_ENTRY}]").parse::<Diagram>().is_ok());
        assert!(format!("[{}]", MAX_ENTRY + 1).parse::<Diagram>().is_err());
        assert!("[-9223372036854775808]".parse::<Diagram>().is_err());
        assert!(serde_json::from_str::<Diagram>("[9223372036854775807]").is_err());
    }
}
