//! Segmented full-factorization driver: visits every integer in `[2, x]` in
//! ascending order together with its sorted factorization, keeping memory
//! bounded by the segment size.
//!
//! Each segment takes two division passes over the base primes `<= sqrt(x)`:
//! the first counts factor slots per offset (plus one for a prime cofactor
//! larger than the root), the second places `(prime, exponent)` pairs into
//! one flat arena at prefix-summed offsets. Base primes are scanned in
//! ascending order, so every factor list comes out sorted.

use crate::primes::{shared_table, PrimeTableError};
use thiserror::Error;

/// Default number of integers per segment.
pub const DEFAULT_SEGMENT: usize = 1 << 22;

/// Largest `x` the exact enumeration accepts.
pub const ENUMERATION_BUDGET: f64 = 2.0e10;

const SEGMENT_MIN: usize = 16;
const SEGMENT_MAX: usize = 1 << 24;

#[derive(Debug, Clone)]
pub struct SegmentConfig {
    pub segment_size: usize,
}

impl Default for SegmentConfig {
    fn default() -> Self {
        Self {
            segment_size: DEFAULT_SEGMENT,
        }
    }
}

#[derive(Debug, Error)]
pub enum SieveError {
    #[error("enumeration bound {x:e} exceeds the supported range {budget:e}")]
    RangeTooLarge { x: f64, budget: f64 },
    #[error("segment [{lo}, {hi}) is not a usable sieve window")]
    BadSegment { lo: u64, hi: u64 },
    #[error(transparent)]
    PrimeTable(#[from] PrimeTableError),
}

/// Calls `visit(n, primes, exponents)` for every `2 <= n <= floor(x)` in
/// ascending order; the slices are the sorted factorization of `n`. An `x`
/// below 2 visits nothing.
pub fn for_each_factored(
    x: f64,
    config: &SegmentConfig,
    mut visit: impl FnMut(u64, &[u64], &[u8]),
) -> Result<(), SieveError> {
    if x > ENUMERATION_BUDGET {
        return Err(SieveError::RangeTooLarge {
            x,
            budget: ENUMERATION_BUDGET,
        });
    }
    let seg = config.segment_size;
    if !(SEGMENT_MIN..=SEGMENT_MAX).contains(&seg) {
        return Err(SieveError::BadSegment {
            lo: 2,
            hi: 2 + seg as u64,
        });
    }
    if x < 2.0 {
        return Ok(());
    }
    let n_max = x.floor() as u64;
    let root = n_max.isqrt();
    let table = shared_table(root.max(2))?;
    let base = table.primes_upto(root);

    let mut rem: Vec<u64> = Vec::new();
    let mut starts: Vec<u32> = Vec::new();
    let mut cursor: Vec<u32> = Vec::new();
    let mut flat_primes: Vec<u64> = Vec::new();
    let mut flat_exps: Vec<u8> = Vec::new();

    let mut lo = 2u64;
    while lo <= n_max {
        let hi = (lo + seg as u64 - 1).min(n_max);
        let len = (hi - lo + 1) as usize;

        // Pass 1: divide out base primes, counting factor slots per offset.
        rem.clear();
        rem.extend(lo..=hi);
        starts.clear();
        starts.resize(len + 1, 0);
        for &p in base {
            if p * p > hi {
                break;
            }
            let mut j = lo.div_ceil(p) * p;
            while j <= hi {
                let idx = (j - lo) as usize;
                let mut r = rem[idx];
                while r % p == 0 {
                    r /= p;
                }
                rem[idx] = r;
                starts[idx + 1] += 1;
                j += p;
            }
        }
        for idx in 0..len {
            if rem[idx] > 1 {
                starts[idx + 1] += 1;
            }
        }
        for idx in 0..len {
            starts[idx + 1] += starts[idx];
        }
        let total = starts[len] as usize;

        // Pass 2: repeat the division, placing factors at the prefix-summed
        // offsets. Ascending base primes keep each list sorted; the cofactor
        // (prime, since it exceeds sqrt(hi)) lands last.
        flat_primes.clear();
        flat_primes.resize(total, 0);
        flat_exps.clear();
        flat_exps.resize(total, 0);
        cursor.clear();
        cursor.extend_from_slice(&starts[..len]);
        rem.clear();
        rem.extend(lo..=hi);
        for &p in base {
            if p * p > hi {
                break;
            }
            let mut j = lo.div_ceil(p) * p;
            while j <= hi {
                let idx = (j - lo) as usize;
                let mut r = rem[idx];
                let mut e = 0u8;
                while r % p == 0 {
                    r /= p;
                    e += 1;
                }
                rem[idx] = r;
                let at = cursor[idx] as usize;
                flat_primes[at] = p;
                flat_exps[at] = e;
                cursor[idx] += 1;
                j += p;
            }
        }
        for idx in 0..len {
            if rem[idx] > 1 {
                let at = cursor[idx] as usize;
                flat_primes[at] = rem[idx];
                flat_exps[at] = 1;
            }
        }

        for idx in 0..len {
            let range = starts[idx] as usize..starts[idx + 1] as usize;
            visit(lo + idx as u64, &flat_primes[range.clone()], &flat_exps[range]);
        }
        lo = hi + 1;
    }
    Ok(())
}
