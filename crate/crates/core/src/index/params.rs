use crate::error::{Error, Result};

pub const DEFAULT_SEED: u64 = 0x6f70_6d65_5eed_0001;

/// Resolved construction parameters for a text of length `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexParams {
    pub n: usize,
    /// Exponent `c` as a fraction.
    pub c_num: u64,
    pub c_den: u64,
    /// Window stride and truncation length of suffix encodings.
    pub ell: usize,
    pub sample: usize,
    pub occ_threshold: usize,
    /// Patterns shorter than this are answered from the short-pattern table.
    pub m_min: usize,
    pub seed: u64,
}

/// Optional overrides; everything left unset takes its default for `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParamsBuilder {
    c_num: u64,
    c_den: u64,
    ell: Option<usize>,
    sample: Option<usize>,
    occ_threshold: Option<usize>,
    m_min: Option<usize>,
    seed: u64,
}

impl Default for ParamsBuilder {
    fn default() -> Self {
        ParamsBuilder {
            c_num: 1,
            c_den: 1,
            ell: None,
            sample: None,
            occ_threshold: None,
            m_min: None,
            seed: DEFAULT_SEED,
        }
    }
}

fn lg(n: usize) -> f64 {
    (n as f64).log2()
}

/// `⌈x⌉`, forgiving floating-point noise just above an integer.
fn ceil_eps(x: f64) -> usize {
    (x - 1e-9).ceil().max(0.0) as usize
}

/// `⌈lg^c n⌉`.
pub fn lg_pow_ceil(n: usize, c_num: u64, c_den: u64) -> usize {
    if n < 2 {
        return 0;
    }
    ceil_eps(lg(n).powf(c_num as f64 / c_den as f64))
}

/// `max(1, ⌊lg n / lg lg n⌋)`, and 1 below `n = 4`.
pub fn default_sample(n: usize) -> usize {
    if n < 4 {
        return 1;
    }
    let l = lg(n);
    ((l / l.log2() + 1e-9).floor() as usize).max(1)
}

impl ParamsBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn c(mut self, num: u64, den: u64) -> Self {
        self.c_num = num;
        self.c_den = den;
        self
    }

    pub fn ell(mut self, ell: usize) -> Self {
        self.ell = Some(ell);
        self
    }

    pub fn sample(mut self, sample: usize) -> Self {
        self.sample = Some(sample);
        self
    }

    pub fn occ_threshold(mut self, t: usize) -> Self {
        self.occ_threshold = Some(t);
        self
    }

    pub fn m_min(mut self, m: usize) -> Self {
        self.m_min = Some(m);
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn build(self, n: usize) -> Result<IndexParams> {
        if self.c_num == 0 || self.c_den == 0 {
            return Err(Error::InvalidParams("c must be a positive fraction".into()));
        }
        if n < 2 {
            return Err(Error::InvalidArgument(format!("text length {n} is below 2")));
        }
        let ell = self.ell.unwrap_or_else(|| lg_pow_ceil(n, self.c_num, self.c_den) + ceil_eps(lg(n))).min(n);
        let sample = self.sample.unwrap_or_else(|| default_sample(n));
        let params = IndexParams {
            n,
            c_num: self.c_num,
            c_den: self.c_den,
            ell,
            sample,
            occ_threshold: self.occ_threshold.unwrap_or(sample),
            m_min: self.m_min.unwrap_or(sample),
            seed: self.seed,
        };
        params.validate()?;
        Ok(params)
    }
}

impl IndexParams {
    /// Longest pattern accepted by `count` and `locate_one`, `⌈lg^c n⌉`.
    /// Patterns longer than the text are accepted and never occur.
    pub fn max_pattern_len(&self) -> usize {
        lg_pow_ceil(self.n, self.c_num, self.c_den)
    }

    /// Longest pattern the queries accept: [`max_pattern_len`](Self::max_pattern_len),
    /// unbounded when `ell = n` and every suffix is stored in full.
    pub fn accepted_pattern_len(&self) -> usize {
        if self.ell == self.n {
            usize::MAX
        } else {
            self.max_pattern_len()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if self.n < 2 {
            return Err(Error::InvalidArgument(format!("text length {} is below 2", self.n)));
        }
        if self.c_num == 0 || self.c_den == 0 {
            return bad("c must be a positive fraction".into());
        }
        if self.ell == 0 || self.ell > self.n {
            return bad(format!("ell = {} outside 1..={}", self.ell, self.n));
        }
        if self.sample == 0 {
            return bad("sample must be positive".into());
        }
        if self.m_min == 0 || self.m_min > self.sample {
            return bad(format!("m_min = {} outside 1..=sample ({})", self.m_min, self.sample));
        }
        if self.occ_threshold + 1 < self.sample {
            return bad(format!("threshold {} is below sample - 1 = {}", self.occ_threshold, self.sample - 1));
        }
        let max_m = self.max_pattern_len().min(self.n);
        if max_m == 0 || (self.ell < self.n && max_m + self.sample > self.ell) {
            return bad(format!(
                "ell = {} leaves no room for sample = {} steps past patterns of length {max_m}",
                self.ell, self.sample
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let p = ParamsBuilder::new().build(1024).unwrap();
        assert_eq!((p.ell, p.sample, p.occ_threshold, p.m_min, p.max_pattern_len()), (20, 3, 3, 3, 10));
        let p = ParamsBuilder::new().build(1 << 16).unwrap();
        assert_eq!((p.ell, p.sample, p.max_pattern_len()), (32, 4, 16));
        let p = ParamsBuilder::new().c(2, 1).build(1 << 16).unwrap();
        assert_eq!((p.ell, p.max_pattern_len()), (272, 256));
        let p = ParamsBuilder::new().build(3).unwrap();
        assert_eq!((p.ell, p.sample, p.max_pattern_len()), (3, 1, 2));
        let p = ParamsBuilder::new().c(3, 1).build(4).unwrap();
        assert_eq!((p.ell, p.max_pattern_len()), (4, 8));
    }

    #[test]
    fn running_example_parameters() {
        let p = ParamsBuilder::new().sample(4).occ_threshold(4).build(30).unwrap();
        assert_eq!((p.ell, p.max_pattern_len(), p.m_min), (10, 5, 4));
        let p = ParamsBuilder::new().c(2, 1).sample(4).build(30).unwrap();
        assert_eq!((p.ell, p.max_pattern_len()), (30, 25));
    }

    #[test]
    fn rejections() {
        assert!(matches!(ParamsBuilder::new().build(1), Err(Error::InvalidArgument(_))));
        assert!(ParamsBuilder::new().sample(0).build(100).is_err());
        assert!(ParamsBuilder::new().sample(4).occ_threshold(2).build(100).is_err());
        assert!(ParamsBuilder::new().sample(3).m_min(4).build(100).is_err());
        assert!(ParamsBuilder::new().c(0, 1).build(100).is_err());
        assert!(ParamsBuilder::new().sample(11).build(1024).is_err());
    }
}
