//! The acceptance suite, shared by `opme selftest` and the test harness.
//!
//! Each criterion returns an [`Outcome`] instead of panicking so that a
//! caller can print one line per criterion and decide how to exit.

use std::fmt;
use std::hint::black_box;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::generate;
use crate::encoding::{order_isomorphic, RankValue};
use crate::index::{suffix_order, AuditReport, BackstepEntry, IndexParams, OpIndex, ParamsBuilder};
use crate::oracle::{naive_lbd, naive_matches, naive_suffix_order, RUNNING_EXAMPLE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scale {
    /// Seconds: reduced sweeps, smaller timing texts.
    Quick,
    /// The sizes the criteria are stated at.
    #[default]
    Standard,
    /// Larger sweeps for release checks.
    Full,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{verdict}\t{}\t{}\t{}\t{:.3}s", self.id, self.title, self.detail, self.elapsed.as_secs_f64())
    }
}

pub const CRITERIA: [(usize, &str); 8] = [
    (1, "running example tables"),
    (2, "worked query and chain"),
    (3, "oracle equivalence sweep"),
    (4, "encoding-only output"),
    (5, "space scaling"),
    (6, "time scaling"),
    (7, "succinct structure audits"),
    (8, "exhaustive tiny instances"),
];

pub fn run_all(scale: Scale) -> Vec<Outcome> {
    CRITERIA.iter().map(|&(id, _)| run(id, scale).expect("known criterion")).collect()
}

/// Runs one criterion; `None` for an unknown id.
pub fn run(id: usize, scale: Scale) -> Option<Outcome> {
    let title = CRITERIA.iter().find(|c| c.0 == id)?.1;
    let start = Instant::now();
    let (passed, detail) = match id {
        1 => running_example_tables(),
        2 => worked_query(),
        3 => oracle_sweep(scale),
        4 => encoding_only(scale),
        5 => space_scaling(scale),
        6 => time_scaling(scale),
        7 => structure_audits(scale),
        _ => tiny_instances(),
    };
    let elapsed = start.elapsed();
    let limit = match id {
        1 | 2 => Some(Duration::from_secs(1)),
        3 => Some(Duration::from_secs(300)),
        8 => Some(Duration::from_secs(60)),
        _ => None,
    };
    let in_time = limit.is_none_or(|l| elapsed < l);
    let detail = if in_time { detail } else { format!("{detail}; over the {}s limit", limit.unwrap().as_secs()) };
    Some(Outcome { id, title, passed: passed && in_time, detail, elapsed })
}

const R: [usize; 30] =
    [30, 29, 22, 13, 2, 23, 8, 14, 20, 3, 16, 24, 11, 9, 15, 28, 7, 19, 12, 1, 21, 10, 27, 6, 18, 26, 17, 5, 25, 4];
const SAMPLED: [usize; 13] = [1, 4, 7, 8, 9, 11, 12, 16, 19, 20, 24, 28, 30];
/// (R-position, L, doubled B, D) of every unsampled row.
const ROWS: [(usize, usize, u32, usize); 17] = [
    (2, 2, 3, 4),
    (3, 2, 1, 2),
    (5, 2, 1, 1),
    (6, 3, 7, 3),
    (10, 3, 7, 1),
    (13, 2, 1, 3),
    (14, 3, 7, 3),
    (15, 2, 3, 1),
    (17, 3, 3, 4),
    (18, 3, 3, 5),
    (21, 2, 5, 1),
    (22, 2, 3, 2),
    (23, 4, 3, 2),
    (25, 4, 2, 3),
    (26, 4, 1, 1),
    (27, 2, 5, 3),
    (29, 2, 5, 4),
];

fn running_example_params() -> IndexParams {
    ParamsBuilder::new().sample(4).occ_threshold(4).build(RUNNING_EXAMPLE.len()).expect("valid")
}

fn running_example_tables() -> (bool, String) {
    let params = running_example_params();
    let idx = match OpIndex::build(&RUNNING_EXAMPLE, params) {
        Ok(idx) => idx,
        Err(e) => return (false, format!("build failed: {e}")),
    };
    let mut wrong = Vec::new();
    if suffix_order(&RUNNING_EXAMPLE, params.ell) != R || naive_suffix_order(&RUNNING_EXAMPLE) != R {
        wrong.push("R".to_string());
    }
    if idx.sampled_positions() != SAMPLED || SAMPLED.iter().any(|&p| idx.sampled_value(p) != Some(R[p - 1])) {
        wrong.push("sampled entries".into());
    }
    let reference = naive_lbd(&RUNNING_EXAMPLE, 4, 4, params.ell);
    for i in 1..=R.len() {
        let expected = ROWS.iter().find(|r| r.0 == i).map(|&(_, l, b, d)| BackstepEntry {
            l: Some(l),
            b: Some(RankValue::from_doubled(b)),
            d: Some(d),
        });
        let oracle = reference.rows[i - 1].map(|r| BackstepEntry { l: r.l, b: r.b, d: r.d });
        if idx.backstep_entry(i) != expected || oracle != expected {
            wrong.push(format!("row {i}"));
        }
    }
    if wrong.is_empty() {
        (true, format!("R, {} sampled entries and {} L/B/D rows match", SAMPLED.len(), ROWS.len()))
    } else {
        (false, format!("mismatch in {}", wrong.join(", ")))
    }
}

fn worked_query() -> (bool, String) {
    let Ok(idx) = OpIndex::build(&RUNNING_EXAMPLE, running_example_params()) else {
        return (false, "build failed".into());
    };
    let p = [2, 3, 1, 2];
    let (Ok(trace), Ok(slow)) = (idx.trace_fast(&p), idx.query_slow(&p)) else {
        return (false, "query failed".into());
    };
    let visited = trace.visited.iter().map(usize::to_string).collect::<Vec<_>>().join("->");
    let fast = (trace.result.count, trace.result.position);
    let ok = fast == (1, Some(19)) && (slow.count, slow.position) == (1, Some(19)) && trace.visited == [18, 25, 27, 11];
    (ok, format!("fast {fast:?}, slow {:?}, chain {visited}", (slow.count, slow.position)))
}

/// One text of the oracle sweep, with its parameters.
struct SweepText {
    text: Vec<u64>,
    params: IndexParams,
    label: String,
}

fn sweep_shape(scale: Scale) -> (usize, usize, usize) {
    // (texts, patterns per text, largest n)
    match scale {
        Scale::Quick => (24, 50, 1024),
        Scale::Standard => (100, 100, 4096),
        Scale::Full => (400, 100, 4096),
    }
}

fn sweep_texts(scale: Scale) -> impl Iterator<Item = SweepText> {
    let (texts, _, max_n) = sweep_shape(scale);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    (0..texts).map(move |k| {
        let n = match k {
            0 => 64,
            1 => max_n,
            _ => (64.0 * (max_n as f64 / 64.0).powf(rng.gen::<f64>())) as usize,
        };
        // alphabets 2, 4, 16, 2^30, then a tie-free permutation
        let (sigma, ties) = [(2, true), (4, true), (16, true), (1 << 30, true), (n as u64, false)][k % 5];
        let (c_num, c_den) = [(1, 1), (3, 2), (2, 1)][k % 3];
        let text = generate(n, sigma, rng.gen(), ties).expect("valid corpus");
        let params = ParamsBuilder::new().c(c_num, c_den).build(n).expect("valid parameters");
        let kind = if ties { format!("sigma={sigma}") } else { "permutation".into() };
        SweepText { text, params, label: format!("n={n} {kind} c={c_num}/{c_den}") }
    })
}

fn sweep_patterns(rng: &mut ChaCha8Rng, text: &[u64], max_m: usize, count: usize) -> Vec<Vec<u64>> {
    let n = text.len();
    let top = max_m.min(n);
    (0..count)
        .map(|k| {
            let m = match k {
                0 => 1,
                1 => top,
                _ => rng.gen_range(1..=top),
            };
            let j = rng.gen_range(0..=n - m);
            let mut p = text[j..j + m].to_vec();
            match k % 4 {
                0 | 1 => {}
                2 => {
                    let t = rng.gen_range(0..m);
                    p[t] = p[t].wrapping_add(rng.gen_range(1..4));
                }
                _ => p.iter_mut().for_each(|x| *x = rng.gen_range(0..4)),
            }
            p
        })
        .collect()
}

fn oracle_sweep(scale: Scale) -> (bool, String) {
    let (_, per_text, _) = sweep_shape(scale);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let (mut cases, mut found, mut mismatches) = (0, 0, Vec::new());
    for t in sweep_texts(scale) {
        let idx = match OpIndex::build(&t.text, t.params) {
            Ok(idx) => idx,
            Err(e) => {
                mismatches.push(format!("{}: build failed: {e}", t.label));
                continue;
            }
        };
        for p in sweep_patterns(&mut rng, &t.text, t.params.max_pattern_len(), per_text) {
            cases += 1;
            let truth = naive_matches(&t.text, &p);
            found += usize::from(truth.count() > 0);
            let count_ok = idx.count(&p).is_ok_and(|c| c == truth.count());
            let locate_ok = match idx.locate_one(&p) {
                Ok(Some(j)) => {
                    truth.positions.binary_search(&j).is_ok() && order_isomorphic(&t.text[j - 1..][..p.len()], &p)
                }
                Ok(None) => truth.count() == 0,
                Err(_) => false,
            };
            let scan_ok = idx.scan_all(&p).is_ok_and(|s| s == truth.positions);
            if !(count_ok && locate_ok && scan_ok) {
                mismatches.push(format!("{} m={}", t.label, p.len()));
            }
        }
    }
    let ok = mismatches.is_empty() && (scale == Scale::Quick || cases >= 10_000);
    let mut detail = format!("{cases} cases ({found} with occurrences), {} mismatches", mismatches.len());
    if let Some(first) = mismatches.first() {
        detail.push_str(&format!("; first: {first}"));
    }
    (ok, detail)
}

/// A random strictly increasing map applied to every character.
fn increasing_image(rng: &mut ChaCha8Rng, text: &[u64], max_gap: u64) -> Vec<u64> {
    let mut distinct = text.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let mut next = rng.gen_range(0..max_gap);
    let image: Vec<u64> = distinct
        .iter()
        .map(|_| {
            let v = next;
            next += rng.gen_range(1..=max_gap);
            v
        })
        .collect();
    text.iter().map(|x| image[distinct.binary_search(x).expect("present")]).collect()
}

fn encoding_only(scale: Scale) -> (bool, String) {
    let instances = match scale {
        Scale::Quick => 20,
        Scale::Standard => 100,
        Scale::Full => 300,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let mut differing = 0;
    for _ in 0..instances {
        let n = rng.gen_range(2..=2000);
        let sigma = [2, 4, 16, 256, 1 << 30][rng.gen_range(0..5)];
        let text = generate(n, sigma, rng.gen(), true).expect("valid corpus");
        let image = increasing_image(&mut rng, &text, 1 << 40);
        let params = ParamsBuilder::new().c(rng.gen_range(1..=2), 1).build(n).expect("valid parameters");
        let a = OpIndex::build(&text, params).map(|i| i.to_bytes());
        let b = OpIndex::build(&image, params).map(|i| i.to_bytes());
        differing += usize::from(!(a.is_ok() && a == b));
    }

    // the same n = 4096 text over 4 symbols, and spread over 2^30 values
    let n = if scale == Scale::Quick { 1024 } else { 4096 };
    let params = ParamsBuilder::new().build(n).expect("valid parameters");
    let small = generate(n, 4, 11, true).expect("valid corpus");
    let wide = increasing_image(&mut rng, &small, (1 << 30) / 5);
    let size = |t: &[u64]| OpIndex::build(t, params).map(|i| i.to_bytes().len()).unwrap_or(0);
    let (size4, size30) = (size(&small), size(&wide));
    let independent = size(&generate(n, 1 << 30, 12, true).expect("valid corpus"));
    let wide_ok = wide.iter().all(|&x| x < 1 << 30);

    let ok = differing == 0 && size4 == size30 && size4 > 0 && wide_ok;
    let detail = format!(
        "{}/{instances} byte-identical; n={n}: {size4} bytes at sigma=4, {size30} at sigma=2^30 \
         (independent 2^30 text: {independent})",
        instances - differing
    );
    (ok, detail)
}

fn lg_lg(n: usize) -> f64 {
    (n as f64).log2().log2()
}

fn space_scaling(scale: Scale) -> (bool, String) {
    let exps: &[u32] = if scale == Scale::Quick { &[10, 12, 14] } else { &[10, 12, 14, 16] };
    let mut bps = Vec::new();
    for &e in exps {
        let n = 1usize << e;
        let text = generate(n, 1 << 30, u64::from(e), true).expect("valid corpus");
        let params = ParamsBuilder::new().build(n).expect("valid parameters");
        match OpIndex::build(&text, params) {
            Ok(idx) => bps.push(8.0 * idx.to_bytes().len() as f64 / n as f64),
            Err(e) => return (false, format!("build failed at n=2^{e}")),
        }
    }
    let mut ok = true;
    let mut parts =
        vec![format!("bits/symbol {}", bps.iter().map(|b| format!("{b:.1}")).collect::<Vec<_>>().join(" "))];
    for k in 1..exps.len() {
        let ratio = bps[k] / bps[k - 1];
        let limit = 1.1 * lg_lg(1 << exps[k]) / lg_lg(1 << exps[k - 1]);
        ok &= ratio <= limit;
        parts.push(format!("2^{}/2^{}: {ratio:.3} <= {limit:.3}", exps[k], exps[k - 1]));
    }
    (ok, parts.join("; "))
}

/// Median per-call latency of `query_fast` over substrings of length `m`.
fn median_latency(idx: &OpIndex, text: &[u64], m: usize, rng: &mut ChaCha8Rng) -> f64 {
    const PATTERNS: usize = 201;
    const REPS: u32 = 16;
    let patterns: Vec<&[u64]> = (0..PATTERNS)
        .map(|_| {
            let j = rng.gen_range(0..=text.len() - m);
            &text[j..j + m]
        })
        .collect();
    for p in &patterns {
        black_box(idx.query_fast(p).ok());
    }
    let mut samples: Vec<f64> = patterns
        .iter()
        .map(|p| {
            let start = Instant::now();
            for _ in 0..REPS {
                black_box(idx.query_fast(black_box(p)).ok());
            }
            start.elapsed().as_nanos() as f64 / f64::from(REPS)
        })
        .collect();
    samples.sort_by(f64::total_cmp);
    samples[PATTERNS / 2]
}

/// Least-squares slope of `ln y` against `ln x`.
fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let k = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / k, ly.iter().sum::<f64>() / k);
    let cov: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let var: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    cov / var
}

fn time_scaling(scale: Scale) -> (bool, String) {
    let ms = [4usize, 8, 16, 32, 64];
    let (small, large) = if scale == Scale::Quick { (1 << 10, 1 << 14) } else { (1 << 12, 1 << 16) };
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut medians = Vec::new();
    for n in [large, small] {
        let text = generate(n, 1 << 30, n as u64, true).expect("valid corpus");
        let params = ParamsBuilder::new().c(2, 1).build(n).expect("valid parameters");
        let Ok(idx) = OpIndex::build(&text, params) else {
            return (false, format!("build failed at n={n}"));
        };
        medians.push(ms.iter().map(|&m| median_latency(&idx, &text, m, &mut rng)).collect::<Vec<_>>());
    }
    let xs: Vec<f64> = ms.iter().map(|&m| m as f64).collect();
    let slope = log_log_slope(&xs, &medians[0]);
    let spread = medians[0].iter().zip(&medians[1]).map(|(a, b)| a.max(*b) / a.min(*b)).fold(0.0, f64::max);
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.0}")).collect::<Vec<_>>().join(" ");
    let ok = slope <= 1.2 && spread <= 2.0;
    let detail = format!(
        "median ns for m=4..64 at n={large}: {}; at n={small}: {}; slope {slope:.2} <= 1.20; \
         worst n-ratio {spread:.2} <= 2",
        fmt(&medians[0]),
        fmt(&medians[1])
    );
    (ok, detail)
}

fn structure_audits(scale: Scale) -> (bool, String) {
    let mut total = AuditReport::default();
    let mut builds = 0;
    let mut texts: Vec<(Vec<u64>, IndexParams)> = vec![(RUNNING_EXAMPLE.to_vec(), running_example_params())];
    texts.extend(sweep_texts(scale).map(|t| (t.text, t.params)));
    for (text, params) in texts {
        let report = match OpIndex::build(&text, params).and_then(|idx| idx.audit(&text)) {
            Ok(r) => r,
            Err(e) => return (false, format!("build or audit failed: {e}")),
        };
        builds += 1;
        if total.checks.is_empty() {
            total = report;
        } else {
            for (acc, c) in total.checks.iter_mut().zip(report.checks) {
                acc.checked += c.checked;
                acc.violations += c.violations;
            }
        }
    }
    let parts: Vec<String> =
        total.checks.iter().map(|c| format!("{} {}/{}", c.name, c.violations, c.checked)).collect();
    (total.passed(), format!("{builds} builds, violations/checks: {}", parts.join(", ")))
}

fn tiny_instances() -> (bool, String) {
    let patterns: Vec<Vec<u64>> = (1..=4u32).flat_map(words).collect();
    let (mut builds, mut cases, mut mismatches) = (0, 0, 0);
    let mut first = None;
    for n in 2..=7u32 {
        for text in words(n) {
            for sample in 1..=3 {
                let Ok(params) = ParamsBuilder::new().c(3, 1).sample(sample).build(text.len()) else { continue };
                let Ok(idx) = OpIndex::build(&text, params) else {
                    mismatches += 1;
                    continue;
                };
                builds += 1;
                for p in &patterns {
                    cases += 1;
                    let truth = naive_matches(&text, p);
                    let agree = |r: crate::Result<crate::QueryResult>| {
                        r.is_ok_and(|r| {
                            r.count == truth.count()
                                && r.position.map_or(truth.count() == 0, |j| truth.positions.contains(&j))
                        })
                    };
                    if !(agree(idx.query_fast(p)) && agree(idx.query_slow(p))) {
                        mismatches += 1;
                        first.get_or_insert_with(|| format!("text {text:?} pattern {p:?} sample {sample}"));
                    }
                }
            }
        }
    }
    let mut detail = format!("{builds} builds over all texts of length 2..=7, {cases} cases, {mismatches} mismatches");
    if let Some(f) = first {
        detail.push_str(&format!("; first: {f}"));
    }
    (mismatches == 0, detail)
}

/// Every string of length `len` over {1, 2, 3}.
fn words(len: u32) -> Vec<Vec<u64>> {
    (0..3u64.pow(len))
        .map(|mut code| {
            (0..len)
                .map(|_| {
                    let d = code % 3;
                    code /= 3;
                    d + 1
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn goldens_pass() {
        for id in [1, 2] {
            let o = run(id, Scale::Quick).unwrap();
            assert!(o.passed, "{o}");
        }
        assert!(run(9, Scale::Quick).is_none());
    }

    #[test]
    fn word_enumeration() {
        assert_eq!(words(2).len(), 9);
        assert!(words(3).iter().all(|w| w.len() == 3 && w.iter().all(|&x| (1..=3).contains(&x))));
    }

    #[test]
    fn slope_of_a_power_law() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(0.7)).collect();
        assert!((log_log_slope(&xs, &ys) - 0.7).abs() < 1e-9);
    }
}
