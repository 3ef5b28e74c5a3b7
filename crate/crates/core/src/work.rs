use crate::error::{Error, Result};

/// Default ceiling on elementary evaluations for any single enumeration.
pub const DEFAULT_WORK_CEILING: u64 = 1_000_000_000;

/// Enumeration limits shared by every exhaustive pipeline.
///
/// `workers` only changes how the enumeration space is split; results never
/// depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub work_ceiling: u64,
    pub workers: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            work_ceiling: DEFAULT_WORK_CEILING,
            workers: 1,
        }
    }
}

impl Limits {
    pub fn with_workers(self, workers: usize) -> Self {
        Limits {
            workers: workers.max(1),
            ..self
        }
    }

    pub fn check(&self, needed: u128) -> Result<()> {
        if needed > self.work_ceiling as u128 {
            Err(Error::WorkCeilingExceeded {
                needed,
                ceiling: self.work_ceiling,
            })
        } else {
            Ok(())
        }
    }

    /// Runs `job` on a pool sized by `workers`; a single worker runs inline.
    pub(crate) fn install<T: Send>(&self, job: impl FnOnce() -> T + Send) -> T {
        if self.workers <= 1 {
            return job();
        }
        match rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
        {
            Ok(pool) => pool.install(job),
            Err(_) => job(),
        }
    }
}

/// `base^exp` saturating at `u128::MAX`.
pub fn pow_u128(base: u64, exp: u32) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}

/// Binomial coefficient, saturating.
pub fn binomial_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial_u128(5, 3), 10);
        assert_eq!(binomial_u128(16, 10), 8008);
        assert_eq!(binomial_u128(3, 4), 0);
        assert_eq!(binomial_u128(7, 0), 1);
    }

    #[test]
    fn ceiling_rejects() {
        let limits = Limits {
            work_ceiling: 10,
            workers: 1,
        };
        assert!(limits.check(10).is_ok());
        assert!(matches!(
            limits.check(11),
            Err(Error::WorkCeilingExceeded { needed: 11, .. })
        ));
    }
}
