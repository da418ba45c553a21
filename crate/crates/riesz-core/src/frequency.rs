//! Frequency systems for general Dirichlet series: the strictly
//! increasing, non-negative exponent sequences `lambda_1 < lambda_2 < ...`
//! attached to a coefficient sequence.

use crate::error::{Error, Result};

/// Default cap on how many terms a single enumeration may produce.
pub const DEFAULT_MAX_TERMS: u64 = 20_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrequencyKind {
    /// `lambda_n = n - 1`, the power-series case (indices are 1-based,
    /// so the first frequency is 0).
    Integer,
    /// `lambda_n = log n`, the ordinary-Dirichlet-series case.
    LogInteger,
    /// A finite, explicitly listed sequence.
    Explicit,
}

#[derive(Debug, Clone)]
pub struct Frequency {
    kind: FrequencyKind,
    explicit: Vec<f64>,
}

impl Frequency {
    pub fn integer() -> Self {
        Frequency { kind: FrequencyKind::Integer, explicit: Vec::new() }
    }

    pub fn log_integer() -> Self {
        Frequency { kind: FrequencyKind::LogInteger, explicit: Vec::new() }
    }

    /// An explicit finite frequency list; rejects anything that is not
    /// strictly increasing and non-negative.
    pub fn explicit(values: Vec<f64>) -> Result<Self> {
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::NegativeFrequency { index: i, value: v });
            }
            if i > 0 && v <= values[i - 1] {
                return Err(Error::NonMonotoneFrequency { index: i });
            }
        }
        Ok(Frequency { kind: FrequencyKind::Explicit, explicit: values })
    }

    pub fn kind(&self) -> FrequencyKind {
        self.kind
    }

    /// `lambda_n` for a 1-based index.
    pub fn lambda(&self, n: u64) -> f64 {
        debug_assert!(n >= 1);
        match self.kind {
            FrequencyKind::Integer => (n - 1) as f64,
            FrequencyKind::LogInteger => (n as f64).ln(),
            FrequencyKind::Explicit => self.explicit[(n - 1) as usize],
        }
    }

    /// How many frequencies lie strictly below `x`.
    pub fn count_below(&self, x: f64) -> u64 {
        if !(x > 0.0) {
            return 0;
        }
        match self.kind {
            // n - 1 < x  <=>  n < x + 1
            FrequencyKind::Integer => (x + 1.0).ceil() as u64 - 1,
            // log n < x  <=>  n < e^x (saturating for large x)
            FrequencyKind::LogInteger => {
                let bound = x.exp();
                if bound >= u64::MAX as f64 {
                    u64::MAX
                } else {
                    bound.ceil() as u64 - 1
                }
            }
            FrequencyKind::Explicit => {
                self.explicit.iter().take_while(|&&v| v < x).count() as u64
            }
        }
    }

    /// All `(n, lambda_n)` with `lambda_n < x`, 1-based indices.
    ///
    /// The count is checked against the budget before anything is
    /// materialized, so a wildly large `x` fails fast.
    pub fn terms_below(&self, x: f64, max_terms: u64) -> Result<Vec<(u64, f64)>> {
        if x.is_nan() {
            return Err(Error::domain("cutoff x is NaN"));
        }
        let required = self.count_below(x);
        if required > max_terms {
            return Err(Error::TermBudgetExceeded { x, required, budget: max_terms });
        }
        Ok(self.iter_below(x).collect())
    }

    /// Streaming version of [`terms_below`](Self::terms_below) used by
    /// the summation loops; performs no budget check.
    pub fn iter_below(&self, x: f64) -> FrequencyIter<'_> {
        let count = self.count_below(x);
        FrequencyIter { freq: self, next: 1, count }
    }
}

pub struct FrequencyIter<'a> {
    freq: &'a Frequency,
    next: u64,
    count: u64,
}

impl Iterator for FrequencyIter<'_> {
    type Item = (u64, f64);

    #[inline]
    fn next(&mut self) -> Option<(u64, f64)> {
        if self.next > self.count {
            return None;
        }
        let n = self.next;
        self.next += 1;
        Some((n, self.freq.lambda(n)))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rest = (self.count + 1 - self.next) as usize;
        (rest, Some(rest))
    }
}
