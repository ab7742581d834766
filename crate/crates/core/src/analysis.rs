//! Trace and sup-norm statistics over words of a fixed length.
//!
//! Exhaustive runs walk the binary word tree depth-first, one generator
//! multiply per node, with the tree split into `2^PREFIX_DEPTH` prefix
//! subtrees that are tallied independently and summed. Sampled runs draw a
//! 256-bit key from the caller's generator and give each block of
//! `SAMPLE_BLOCK` draws its own ChaCha20 stream, so results depend only on
//! the seed and never on thread count.
//!
//! Entries are tracked as `u128`, which is exact for every length accepted
//! here.

use std::fmt::Write as _;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::monoid::{Letter, Word};

/// Largest `k` accepted for exhaustive enumeration.
pub const EXHAUSTIVE_MAX_K: usize = 26;
/// Largest `k` accepted for sampling (entries stay below `2^127`).
pub const SAMPLED_MAX_K: usize = 180;
/// Largest `k` for an exhaustive ratio median, which keeps every ratio in memory.
pub const EXHAUSTIVE_RATIO_MAX_K: usize = 22;

const PREFIX_DEPTH: usize = 10;
const SAMPLE_BLOCK: usize = 4096;

/// `[a, b, c, d]` of a 2x2 natural matrix.
pub type Mat2 = [u128; 4];

const IDENTITY: Mat2 = [1, 0, 0, 1];

#[inline]
fn push(m: &Mat2, x: Letter) -> Mat2 {
    let [a, b, c, d] = *m;
    match x {
        Letter::L => [a + b, b, c + d, d],
        Letter::R => [a, a + b, c, c + d],
    }
}

#[inline]
pub fn trace(m: &Mat2) -> u128 {
    m[0] + m[3]
}

#[inline]
pub fn sup_norm(m: &Mat2) -> u128 {
    m[0].max(m[1]).max(m[2]).max(m[3])
}

pub fn word_matrix(w: &Word) -> Mat2 {
    w.letters().iter().fold(IDENTITY, |m, &x| push(&m, x))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Statistic {
    Trace,
    SupNorm,
}

impl Statistic {
    pub fn eval(self, m: &Mat2) -> u128 {
        match self {
            Statistic::Trace => trace(m),
            Statistic::SupNorm => sup_norm(m),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Statistic::Trace => "trace",
            Statistic::SupNorm => "supnorm",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleMode {
    Exhaustive,
    Sampled { samples: usize },
}

impl SampleMode {
    fn check(self, k: usize) -> Result<()> {
        if k == 0 {
            return Err(Error::usage("word length k must be at least 1"));
        }
        match self {
            SampleMode::Exhaustive if k > EXHAUSTIVE_MAX_K => Err(Error::usage(format!(
                "exhaustive enumeration is limited to k <= {EXHAUSTIVE_MAX_K}; use sampled mode"
            ))),
            SampleMode::Sampled { samples: 0 } => {
                Err(Error::usage("sampled mode needs at least one sample"))
            }
            SampleMode::Sampled { .. } if k > SAMPLED_MAX_K => Err(Error::usage(format!(
                "sampling is limited to k <= {SAMPLED_MAX_K}"
            ))),
            _ => Ok(()),
        }
    }

    /// Population size: `2^k` or the sample count.
    pub fn total(self, k: usize) -> u64 {
        match self {
            SampleMode::Exhaustive => 1u64 << k,
            SampleMode::Sampled { samples } => samples as u64,
        }
    }
}

/// Equal-width bins over `[lo, hi]`; the top value lands in the last bin.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Binning {
    pub lo: u128,
    pub hi: u128,
    pub bins: usize,
}

impl Binning {
    /// A degenerate range `lo == hi` is widened to `[lo, lo + 1]`.
    pub fn new(lo: u128, hi: u128, bins: usize) -> Result<Self> {
        if bins == 0 {
            return Err(Error::usage("need at least one bin"));
        }
        if hi < lo {
            return Err(Error::usage("bin range is empty"));
        }
        let hi = if hi == lo { lo + 1 } else { hi };
        Ok(Binning { lo, hi, bins })
    }

    pub fn index(&self, v: u128) -> usize {
        let off = v.saturating_sub(self.lo);
        let span = self.hi - self.lo;
        let idx = match off.checked_mul(self.bins as u128) {
            Some(x) => (x / span).min(usize::MAX as u128) as usize,
            None => (off as f64 / span as f64 * self.bins as f64) as usize,
        };
        idx.min(self.bins - 1)
    }

    /// `bins + 1` strictly increasing edges from `lo` to `hi`.
    pub fn edges(&self) -> Vec<f64> {
        let (lo, span) = (self.lo as f64, (self.hi - self.lo) as f64);
        (0..=self.bins)
            .map(|i| lo + span * i as f64 / self.bins as f64)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    pub statistic: Statistic,
    pub k: usize,
    pub mode: SampleMode,
    pub binning: Binning,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Index of the fullest bin (first one on ties).
    pub fn mode_bin(&self) -> usize {
        let max = self.counts.iter().copied().max().unwrap_or(0);
        self.counts.iter().position(|&c| c == max).unwrap_or(0)
    }

    pub fn occupied_bins(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }
}

/// Two-dimensional (trace, sup-norm) histogram, trace-major.
#[derive(Clone, Debug, PartialEq)]
pub struct JointHistogram {
    pub k: usize,
    pub mode: SampleMode,
    pub trace_bins: Binning,
    pub norm_bins: Binning,
    pub counts: Vec<u64>,
}

impl JointHistogram {
    pub fn count(&self, t_bin: usize, s_bin: usize) -> u64 {
        self.counts[t_bin * self.norm_bins.bins + s_bin]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn occupied_cells(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }
}

fn dfs<T>(m: Mat2, left: usize, acc: &mut T, visit: &(impl Fn(&mut T, &Mat2) + Sync)) {
    if left == 0 {
        visit(acc, &m);
        return;
    }
    dfs(push(&m, Letter::L), left - 1, acc, visit);
    dfs(push(&m, Letter::R), left - 1, acc, visit);
}

/// Folds `visit` over the products of all `2^k` words of length `k`.
pub fn fold_all_words<T: Send>(
    k: usize,
    init: impl Fn() -> T + Sync + Send,
    visit: impl Fn(&mut T, &Mat2) + Sync + Send,
    merge: impl Fn(T, T) -> T + Sync + Send,
) -> T {
    let depth = k.min(PREFIX_DEPTH);
    let subtree = |acc: &mut T, prefix: usize| {
        let mut m = IDENTITY;
        for i in (0..depth).rev() {
            m = push(&m, Letter::from_bit(prefix >> i & 1 == 1));
        }
        dfs(m, k - depth, acc, &visit);
    };

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..1usize << depth)
            .into_par_iter()
            .fold(&init, |mut acc, p| {
                subtree(&mut acc, p);
                acc
            })
            .reduce(&init, &merge)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = &merge;
        let mut acc = init();
        for p in 0..1usize << depth {
            subtree(&mut acc, p);
        }
        acc
    }
}

pub fn random_word<R: RngCore + ?Sized>(k: usize, rng: &mut R) -> Word {
    Word::new((0..k).map(|_| Letter::from_bit(rng.random())).collect())
}

fn random_matrix<R: RngCore + ?Sized>(k: usize, rng: &mut R) -> Mat2 {
    let mut m = IDENTITY;
    let mut left = k;
    while left > 0 {
        let take = left.min(64);
        let bits = rng.next_u64();
        for i in 0..take {
            m = push(&m, Letter::from_bit(bits >> i & 1 == 1));
        }
        left -= take;
    }
    m
}

/// Products of `samples` uniform words of length `k`, in a seed-determined order.
pub fn sample_matrices<R: RngCore + ?Sized>(k: usize, samples: usize, rng: &mut R) -> Vec<Mat2> {
    let mut key = [0u8; 32];
    rng.fill_bytes(&mut key);
    let block = |b: usize| {
        let mut r = ChaCha20Rng::from_seed(key);
        r.set_stream(b as u64);
        let len = SAMPLE_BLOCK.min(samples - b * SAMPLE_BLOCK);
        (0..len).map(move |_| random_matrix(k, &mut r))
    };
    let blocks = samples.div_ceil(SAMPLE_BLOCK);

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..blocks).into_par_iter().flat_map_iter(block).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..blocks).flat_map(block).collect()
    }
}

fn min_max(acc: (u128, u128), v: u128) -> (u128, u128) {
    (acc.0.min(v), acc.1.max(v))
}

fn merge_counts(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
    a
}

/// Histogram of `stat` with bins spanning the observed range.
pub fn histogram<R: RngCore + ?Sized>(
    stat: Statistic,
    k: usize,
    bins: usize,
    mode: SampleMode,
    rng: &mut R,
) -> Result<Histogram> {
    histogram_in(stat, k, bins, None, mode, rng)
}

/// Like [`histogram`], with an optional fixed `(lo, hi)` bin range; values
/// outside it are clamped into the end bins.
pub fn histogram_in<R: RngCore + ?Sized>(
    stat: Statistic,
    k: usize,
    bins: usize,
    range: Option<(u128, u128)>,
    mode: SampleMode,
    rng: &mut R,
) -> Result<Histogram> {
    mode.check(k)?;
    Binning::new(0, 0, bins)?;
    let counts_for = |binning: Binning, values: &mut dyn Iterator<Item = u128>| {
        let mut counts = vec![0u64; binning.bins];
        values.for_each(|v| counts[binning.index(v)] += 1);
        counts
    };
    let (binning, counts) = match mode {
        SampleMode::Exhaustive => {
            let (lo, hi) = match range {
                Some(r) => r,
                None => fold_all_words(
                    k,
                    || (u128::MAX, 0),
                    |acc, m| *acc = min_max(*acc, stat.eval(m)),
                    |a, b| min_max(min_max(a, b.0), b.1),
                ),
            };
            let binning = Binning::new(lo, hi, bins)?;
            let counts = fold_all_words(
                k,
                || vec![0u64; bins],
                |acc, m| acc[binning.index(stat.eval(m))] += 1,
                merge_counts,
            );
            (binning, counts)
        }
        SampleMode::Sampled { samples } => {
            let values: Vec<u128> = sample_matrices(k, samples, rng)
                .iter()
                .map(|m| stat.eval(m))
                .collect();
            let (lo, hi) = range.unwrap_or_else(|| {
                values
                    .iter()
                    .fold((u128::MAX, 0), |acc, &v| min_max(acc, v))
            });
            let binning = Binning::new(lo, hi, bins)?;
            let counts = counts_for(binning, &mut values.iter().copied());
            (binning, counts)
        }
    };
    Ok(Histogram {
        statistic: stat,
        k,
        mode,
        binning,
        counts,
    })
}

pub fn trace_histogram<R: RngCore + ?Sized>(
    k: usize,
    bins: usize,
    mode: SampleMode,
    rng: &mut R,
) -> Result<Histogram> {
    histogram(Statistic::Trace, k, bins, mode, rng)
}

pub fn supnorm_histogram<R: RngCore + ?Sized>(
    k: usize,
    bins: usize,
    mode: SampleMode,
    rng: &mut R,
) -> Result<Histogram> {
    histogram(Statistic::SupNorm, k, bins, mode, rng)
}

type Range2 = ((u128, u128), (u128, u128));

fn joint_range(a: Range2, b: Range2) -> Range2 {
    (
        min_max(min_max(a.0, b.0 .0), b.0 .1),
        min_max(min_max(a.1, b.1 .0), b.1 .1),
    )
}

/// (trace, sup-norm) histogram with `bins` bins per axis.
pub fn joint_histogram<R: RngCore + ?Sized>(
    k: usize,
    bins: usize,
    mode: SampleMode,
    rng: &mut R,
) -> Result<JointHistogram> {
    mode.check(k)?;
    Binning::new(0, 0, bins)?;
    let empty: Range2 = ((u128::MAX, 0), (u128::MAX, 0));
    let observe = |acc: &mut Range2, m: &Mat2| {
        acc.0 = min_max(acc.0, trace(m));
        acc.1 = min_max(acc.1, sup_norm(m));
    };
    let cell =
        |tb: &Binning, sb: &Binning, m: &Mat2| tb.index(trace(m)) * sb.bins + sb.index(sup_norm(m));

    let (tb, sb, counts) = match mode {
        SampleMode::Exhaustive => {
            let (tr, sr) = fold_all_words(k, || empty, observe, joint_range);
            let tb = Binning::new(tr.0, tr.1, bins)?;
            let sb = Binning::new(sr.0, sr.1, bins)?;
            let counts = fold_all_words(
                k,
                || vec![0u64; bins * bins],
                |acc, m| acc[cell(&tb, &sb, m)] += 1,
                merge_counts,
            );
            (tb, sb, counts)
        }
        SampleMode::Sampled { samples } => {
            let ms = sample_matrices(k, samples, rng);
            let mut r = empty;
            ms.iter().for_each(|m| observe(&mut r, m));
            let tb = Binning::new(r.0 .0, r.0 .1, bins)?;
            let sb = Binning::new(r.1 .0, r.1 .1, bins)?;
            let mut counts = vec![0u64; bins * bins];
            ms.iter().for_each(|m| counts[cell(&tb, &sb, m)] += 1);
            (tb, sb, counts)
        }
    };
    Ok(JointHistogram {
        k,
        mode,
        trace_bins: tb,
        norm_bins: sb,
        counts,
    })
}

/// Median of `trace / sup-norm` over the population.
pub fn ratio_median<R: RngCore + ?Sized>(k: usize, mode: SampleMode, rng: &mut R) -> Result<f64> {
    mode.check(k)?;
    let ratio = |m: &Mat2| trace(m) as f64 / sup_norm(m) as f64;
    let mut ratios: Vec<f64> = match mode {
        SampleMode::Exhaustive => {
            if k > EXHAUSTIVE_RATIO_MAX_K {
                return Err(Error::usage(format!(
                    "exhaustive ratio median is limited to k <= {EXHAUSTIVE_RATIO_MAX_K}; use sampled mode"
                )));
            }
            fold_all_words(
                k,
                Vec::new,
                |acc, m| acc.push(ratio(m)),
                |mut a, mut b| {
                    a.append(&mut b);
                    a
                },
            )
        }
        SampleMode::Sampled { samples } => {
            sample_matrices(k, samples, rng).iter().map(ratio).collect()
        }
    };
    ratios.sort_by(f64::total_cmp);
    let n = ratios.len();
    Ok(if n % 2 == 1 {
        ratios[n / 2]
    } else {
        (ratios[n / 2 - 1] + ratios[n / 2]) / 2.0
    })
}

/// All words of length `k` whose product has trace 2.
///
/// Traces never decrease along a word (`tr(ML) = tr(M) + b`), so any
/// prefix with trace above 2 is pruned; the walk is still exhaustive.
pub fn parabolic_census(k: usize) -> Result<Vec<Word>> {
    SampleMode::Exhaustive.check(k)?;
    fn walk(m: Mat2, path: &mut Vec<Letter>, k: usize, out: &mut Vec<Word>) {
        if trace(&m) > 2 {
            return;
        }
        if path.len() == k {
            out.push(Word::new(path.clone()));
            return;
        }
        for x in [Letter::L, Letter::R] {
            path.push(x);
            walk(push(&m, x), path, k, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    walk(IDENTITY, &mut Vec::with_capacity(k), k, &mut out);
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BandSample {
    pub word: Word,
    /// Draws used, including the accepted one.
    pub attempts: u64,
}

/// Rejection-samples a uniform word of length `k` with `t0 <= trace <= t1`
/// and sup-norm at most `norm_cap` (`None` disables the cap).
pub fn sample_word_trace_band<R: RngCore + ?Sized>(
    k: usize,
    t0: u128,
    t1: u128,
    norm_cap: Option<u128>,
    max_attempts: u64,
    rng: &mut R,
) -> Result<BandSample> {
    if t0 > t1 {
        return Err(Error::usage("trace band needs t0 <= t1"));
    }
    if norm_cap == Some(0) {
        return Err(Error::usage("sup-norm cap must be at least 1"));
    }
    if k > SAMPLED_MAX_K {
        return Err(Error::usage(format!(
            "sampling is limited to k <= {SAMPLED_MAX_K}"
        )));
    }
    for attempts in 1..=max_attempts {
        let word = random_word(k, rng);
        let m = word_matrix(&word);
        let t = trace(&m);
        if t0 <= t && t <= t1 && norm_cap.is_none_or(|cap| sup_norm(&m) <= cap) {
            return Ok(BandSample { word, attempts });
        }
    }
    Err(Error::Exhausted {
        attempts: max_attempts,
    })
}

pub const CSV_HEADER: &str = "bin_lo,bin_hi,count";
pub const JOINT_CSV_HEADER: &str = "t_lo,t_hi,s_lo,s_hi,count";

/// One row per bin, `bin_lo,bin_hi,count`, after a header row.
pub fn histogram_to_csv(h: &Histogram) -> String {
    let edges = h.binning.edges();
    let mut out = String::with_capacity(32 * (h.counts.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (i, c) in h.counts.iter().enumerate() {
        writeln!(out, "{},{},{}", edges[i], edges[i + 1], c).unwrap();
    }
    out
}

/// One row per cell, trace-major, `t_lo,t_hi,s_lo,s_hi,count`.
pub fn joint_histogram_to_csv(h: &JointHistogram) -> String {
    let te = h.trace_bins.edges();
    let se = h.norm_bins.edges();
    let mut out = String::with_capacity(48 * (h.counts.len() + 1));
    out.push_str(JOINT_CSV_HEADER);
    out.push('\n');
    for (t, tw) in te.windows(2).enumerate() {
        for (s, sw) in se.windows(2).enumerate() {
            writeln!(
                out,
                "{},{},{},{},{}",
                tw[0],
                tw[1],
                sw[0],
                sw[1],
                h.count(t, s)
            )
            .unwrap();
        }
    }
    out
}

/// Reads the count column back out of either CSV layout.
pub fn parse_csv_counts(text: &str) -> Result<Vec<u64>> {
    let mut lines = text.lines().enumerate();
    let width = match lines.next() {
        Some((_, CSV_HEADER)) => 3,
        Some((_, JOINT_CSV_HEADER)) => 5,
        _ => return Err(Error::parse(1, "header", "unrecognized histogram header")),
    };
    lines
        .map(|(i, line)| {
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != width {
                return Err(Error::parse(
                    i + 1,
                    "row",
                    format!("expected {width} columns"),
                ));
            }
            for c in &cols[..width - 1] {
                c.parse::<f64>()
                    .map_err(|_| Error::parse(i + 1, "edge", format!("bad edge `{c}`")))?;
            }
            cols[width - 1].parse::<u64>().map_err(|_| {
                Error::parse(i + 1, "count", format!("bad count `{}`", cols[width - 1]))
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::{entry_bound_exact, word_to_matrix};

    fn rng() -> ChaCha20Rng {
        ChaCha20Rng::seed_from_u64(17)
    }

    /// Independent oracle: evaluate every word from scratch with BigUint.
    fn brute(k: usize) -> Vec<(Word, u128, u128)> {
        (0..1u64 << k)
            .map(|bits| {
                let w = Word::new(
                    (0..k)
                        .map(|i| Letter::from_bit(bits >> i & 1 == 1))
                        .collect(),
                );
                let m = word_to_matrix(&w);
                let t: u128 = m.trace().try_into().unwrap();
                let s: u128 = m.sup_norm().clone().try_into().unwrap();
                (w, t, s)
            })
            .collect()
    }

    #[test]
    fn k1_histograms() {
        let h = trace_histogram(1, 1000, SampleMode::Exhaustive, &mut rng()).unwrap();
        assert_eq!(h.total(), 2);
        assert_eq!(h.occupied_bins(), 1);
        assert_eq!(h.binning.lo, 2);
        let s = supnorm_histogram(1, 1000, SampleMode::Exhaustive, &mut rng()).unwrap();
        assert_eq!(s.occupied_bins(), 1);
        assert_eq!(s.binning.lo, 1);
    }

    #[test]
    fn k2_matches_brute_force() {
        let traces: Vec<u128> = brute(2).iter().map(|x| x.1).collect();
        let mut sorted = traces.clone();
        sorted.sort();
        assert_eq!(sorted, [2, 2, 3, 3]);
        assert!(brute(2).iter().all(|x| x.2 == 2));

        let h = trace_histogram(2, 2, SampleMode::Exhaustive, &mut rng()).unwrap();
        assert_eq!(h.counts, [2, 2]);
        let s = supnorm_histogram(2, 10, SampleMode::Exhaustive, &mut rng()).unwrap();
        assert_eq!(s.total(), 4);
        assert_eq!(s.occupied_bins(), 1);

        let j = joint_histogram(2, 2, SampleMode::Exhaustive, &mut rng()).unwrap();
        // Pairs (2,2) x2 and (3,2) x2.
        assert_eq!(j.total(), 4);
        assert_eq!(j.count(0, 0), 2);
        assert_eq!(j.count(1, 0), 2);
    }

    #[test]
    fn exhaustive_matches_brute_force_k10() {
        let oracle = brute(10);
        let h = trace_histogram(10, 37, SampleMode::Exhaustive, &mut rng()).unwrap();
        let mut expect = vec![0u64; 37];
        for (_, t, _) in &oracle {
            expect[h.binning.index(*t)] += 1;
        }
        assert_eq!(h.counts, expect);
        assert_eq!(h.binning.lo, oracle.iter().map(|x| x.1).min().unwrap());
        assert_eq!(h.binning.hi, oracle.iter().map(|x| x.1).max().unwrap());
    }

    #[test]
    fn sup_norm_max_is_entry_bound() {
        for k in 1..=12 {
            let max = fold_all_words(k, || 0, |acc, m| *acc = (*acc).max(sup_norm(m)), u128::max);
            assert_eq!(
                num_bigint::BigUint::from(max),
                entry_bound_exact(k),
                "k={k}"
            );
        }
    }

    #[test]
    fn guards() {
        let mut r = rng();
        assert!(matches!(
            trace_histogram(27, 10, SampleMode::Exhaustive, &mut r),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            trace_histogram(0, 10, SampleMode::Exhaustive, &mut r),
            Err(Error::Usage(_))
        ));
        assert!(trace_histogram(3, 0, SampleMode::Exhaustive, &mut r).is_err());
        assert!(trace_histogram(181, 10, SampleMode::Sampled { samples: 5 }, &mut r).is_err());
        assert!(parabolic_census(27).is_err());
    }

    #[test]
    fn sampled_is_seed_deterministic() {
        let mode = SampleMode::Sampled { samples: 10_000 };
        let a = trace_histogram(30, 50, mode, &mut rng()).unwrap();
        let b = trace_histogram(30, 50, mode, &mut rng()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.total(), 10_000);
    }

    #[test]
    fn single_sample_single_cell() {
        let j = joint_histogram(8, 10, SampleMode::Sampled { samples: 1 }, &mut rng()).unwrap();
        assert_eq!(j.occupied_cells(), 1);
    }

    #[test]
    fn census_small() {
        let names = |k| -> Vec<String> {
            parabolic_census(k)
                .unwrap()
                .iter()
                .map(|w| w.to_string())
                .collect()
        };
        assert_eq!(names(1), ["L", "R"]);
        assert_eq!(names(2), ["LL", "RR"]);
        let oracle: Vec<String> = brute(9)
            .into_iter()
            .filter(|x| x.1 == 2)
            .map(|x| x.0.to_string())
            .collect();
        let mut got = names(9);
        got.sort();
        let mut want = oracle;
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn band_sampler() {
        let mut r = rng();
        let s = sample_word_trace_band(12, 2, 1 << 13, None, 1, &mut r).unwrap();
        assert_eq!(s.attempts, 1);
        for _ in 0..20 {
            let s = sample_word_trace_band(2, 3, 3, None, 1000, &mut r).unwrap();
            assert!(["LR", "RL"].contains(&s.word.to_string().as_str()));
        }
        let s = sample_word_trace_band(10, 2, 2, None, 100_000, &mut r).unwrap();
        assert!(["LLLLLLLLLL", "RRRRRRRRRR"].contains(&s.word.to_string().as_str()));
        assert!(matches!(
            sample_word_trace_band(10, 1, 1, None, 50, &mut r),
            Err(Error::Exhausted { attempts: 50 })
        ));
        assert!(sample_word_trace_band(4, 3, 2, None, 5, &mut r).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let h = trace_histogram(1, 1, SampleMode::Exhaustive, &mut rng()).unwrap();
        let csv = histogram_to_csv(&h);
        assert_eq!(csv.lines().count(), 2);
        assert_eq!(csv, "bin_lo,bin_hi,count\n2,3,2\n");

        let h = trace_histogram(2, 4, SampleMode::Exhaustive, &mut rng()).unwrap();
        let counts = parse_csv_counts(&histogram_to_csv(&h)).unwrap();
        assert_eq!(counts, h.counts);
        assert_eq!(counts.iter().sum::<u64>(), 4);

        let j = joint_histogram(6, 3, SampleMode::Exhaustive, &mut rng()).unwrap();
        assert_eq!(
            parse_csv_counts(&joint_histogram_to_csv(&j)).unwrap(),
            j.counts
        );

        assert!(parse_csv_counts("nope\n").is_err());
        assert!(parse_csv_counts("bin_lo,bin_hi,count\n1,2\n").is_err());
    }

    #[test]
    fn edges_increase() {
        let b = Binning::new(2, 9, 7).unwrap();
        let e = b.edges();
        assert_eq!(e.len(), 8);
        assert!(e.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(b.index(9), 6);
        assert_eq!(b.index(2), 0);
    }
}
