//! Prime generation, the shared process-wide prime table, and the binary
//! prime-table file format (8-byte magic `MPPRIMES`, then little-endian u64
//! primes in ascending order, complete from 2 up to the last entry).

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

pub const PRIME_TABLE_MAGIC: &[u8; 8] = b"MPPRIMES";

/// Environment variable that overrides where the prime table is loaded from.
pub const PRIME_TABLE_ENV: &str = "MEDIANPRIME_PRIME_TABLE";

#[derive(Debug, thiserror::Error)]
pub enum PrimeTableError {
    #[error("prime table io: {0}")]
    Io(#[from] std::io::Error),
    #[error("prime table {path}: bad magic (expected MPPRIMES)")]
    BadMagic { path: PathBuf },
    #[error("prime table {path}: entries not ascending primes starting at 2")]
    Malformed { path: PathBuf },
    #[error("prime table covers primes <= {available}, but primes <= {required} are required")]
    TooShort { available: u64, required: u64 },
}

/// All primes `<= limit`, materialized.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn generate(limit: u64) -> Self {
        PrimeTable {
            limit,
            primes: sieve_upto(limit),
        }
    }

    /// Largest bound `B` such that the table holds every prime `<= B`.
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Primes `<= bound`; `bound` must not exceed `limit`.
    pub fn primes_upto(&self, bound: u64) -> &[u64] {
        assert!(bound <= self.limit, "prime table too short");
        let n = self.primes.partition_point(|&p| p <= bound);
        &self.primes[..n]
    }

    /// Primes strictly below `bound`; `bound` must not exceed `limit + 1`.
    pub fn primes_below(&self, bound: u64) -> &[u64] {
        assert!(bound <= self.limit.saturating_add(1), "prime table too short");
        let n = self.primes.partition_point(|&p| p < bound);
        &self.primes[..n]
    }

    /// Valid for `n <= limit^2`: table lookup below `limit`, trial division above.
    pub fn is_prime(&self, n: u64) -> bool {
        if n <= self.limit {
            return self.primes.binary_search(&n).is_ok();
        }
        debug_assert!(self.limit.checked_mul(self.limit).map_or(true, |l2| n <= l2));
        for &p in &self.primes {
            if p * p > n {
                break;
            }
            if n % p == 0 {
                return false;
            }
        }
        true
    }

    pub fn load(path: &Path) -> Result<Self, PrimeTableError> {
        let mut file = std::fs::File::open(path)?;
        let mut magic = [0u8; 8];
        file.read_exact(&mut magic)?;
        if &magic != PRIME_TABLE_MAGIC {
            return Err(PrimeTableError::BadMagic { path: path.to_owned() });
        }
        let mut bytes = Vec::new();
        file.read_to_end(&mut bytes)?;
        if bytes.len() % 8 != 0 {
            return Err(PrimeTableError::Malformed { path: path.to_owned() });
        }
        let primes: Vec<u64> = bytes
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        let ascending = primes.windows(2).all(|w| w[0] < w[1]);
        if primes.first() != Some(&2) || !ascending {
            return Err(PrimeTableError::Malformed { path: path.to_owned() });
        }
        let limit = *primes.last().unwrap();
        Ok(PrimeTable { limit, primes })
    }

    pub fn save(&self, path: &Path) -> Result<(), PrimeTableError> {
        let mut file = std::fs::File::create(path)?;
        file.write_all(PRIME_TABLE_MAGIC)?;
        let mut buf = Vec::with_capacity(self.primes.len() * 8);
        for &p in &self.primes {
            buf.extend_from_slice(&p.to_le_bytes());
        }
        file.write_all(&buf)?;
        Ok(())
    }
}

pub fn env_table_path() -> Option<PathBuf> {
    std::env::var_os(PRIME_TABLE_ENV).map(PathBuf::from)
}

static SHARED: Mutex<Option<Arc<PrimeTable>>> = Mutex::new(None);

/// Shared table holding at least all primes `<= min_limit`.
///
/// If `MEDIANPRIME_PRIME_TABLE` is set, the file it names is authoritative;
/// a file that is too short for the request is an error rather than a trigger
/// for regeneration. Otherwise the table is sieved on demand and grown
/// geometrically so repeated callers share one allocation.
pub fn shared_table(min_limit: u64) -> Result<Arc<PrimeTable>, PrimeTableError> {
    let mut guard = SHARED.lock().unwrap();
    if let Some(table) = guard.as_ref() {
        if table.limit() >= min_limit {
            return Ok(Arc::clone(table));
        }
    }
    let table = match env_table_path() {
        Some(path) => {
            let loaded = guard
                .as_ref()
                .filter(|t| t.limit() >= min_limit)
                .cloned()
                .map(Ok)
                .unwrap_or_else(|| PrimeTable::load(&path).map(Arc::new))?;
            if loaded.limit() < min_limit {
                return Err(PrimeTableError::TooShort {
                    available: loaded.limit(),
                    required: min_limit,
                });
            }
            loaded
        }
        None => {
            let target = min_limit.next_power_of_two().max(1 << 17);
            Arc::new(PrimeTable::generate(target))
        }
    };
    *guard = Some(Arc::clone(&table));
    Ok(table)
}

/// Simple odd-only bitmap sieve; returns all primes `<= limit`.
pub fn sieve_upto(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    // Bit i represents the odd number 2i + 1; bit 0 (the number 1) is unused.
    let bits = n / 2 + 1;
    let mut composite = vec![false; bits];
    let mut primes = vec![2];
    let mut i = 1usize;
    while (2 * i + 1) * (2 * i + 1) <= n {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = (p * p) / 2;
            while j < bits {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    for i in 1..bits {
        let v = 2 * i + 1;
        if v <= n && !composite[i] {
            primes.push(v as u64);
        }
    }
    primes
}

/// Calls `f` on every prime `<= limit` in ascending order, sieving in
/// segments so memory stays O(sqrt(limit) + segment).
pub fn for_each_prime(limit: u64, mut f: impl FnMut(u64)) {
    const SEGMENT: u64 = 1 << 21;
    if limit < 2 {
        return;
    }
    f(2);
    let root = limit.isqrt();
    let base = sieve_upto(root);
    // Odd primes in [lo, lo + span), bitmap over odd values only.
    let mut lo = 3u64;
    let mut composite = vec![false; (SEGMENT / 2) as usize];
    while lo <= limit {
        let hi = (lo + SEGMENT).min(limit + 1);
        let slots = ((hi - lo) / 2 + (hi - lo) % 2) as usize;
        composite[..slots].fill(false);
        for &p in base.iter().skip(1) {
            if p * p >= hi {
                break;
            }
            let mut start = ((lo + p - 1) / p) * p;
            if start < p * p {
                start = p * p;
            }
            if start % 2 == 0 {
                start += p;
            }
            let mut j = ((start - lo) / 2) as usize;
            while j < slots {
                composite[j] = true;
                j += p as usize;
            }
        }
        for j in 0..slots {
            if !composite[j] {
                let v = lo + 2 * j as u64;
                if v <= limit {
                    f(v);
                }
            }
        }
        lo = if hi % 2 == 0 { hi + 1 } else { hi };
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        assert_eq!(sieve_upto(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(sieve_upto(2), vec![2]);
        assert_eq!(sieve_upto(1), Vec::<u64>::new());
    }

    #[test]
    fn prime_counts() {
        assert_eq!(sieve_upto(10_000).len(), 1229);
        assert_eq!(sieve_upto(1_000_000).len(), 78_498);
    }

    #[test]
    fn segmented_matches_simple() {
        for limit in [2u64, 3, 100, 65_536, 1_000_003] {
            let mut seen = Vec::new();
            for_each_prime(limit, |p| seen.push(p));
            assert_eq!(seen, sieve_upto(limit), "limit {limit}");
        }
    }

    #[test]
    fn table_slices() {
        let t = PrimeTable::generate(100);
        assert_eq!(t.primes_upto(7), &[2, 3, 5, 7]);
        assert_eq!(t.primes_below(7), &[2, 3, 5]);
        assert_eq!(t.primes_below(101), t.primes());
        assert!(t.is_prime(97));
        assert!(!t.is_prime(91));
        assert!(t.is_prime(101));
        assert!(!t.is_prime(1007));
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("primes.bin");
        let t = PrimeTable::generate(10_000);
        t.save(&path).unwrap();
        let back = PrimeTable::load(&path).unwrap();
        assert_eq!(back.primes(), t.primes());
        assert_eq!(back.limit(), 9973);
    }

    #[test]
    fn rejects_bad_magic() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.bin");
        std::fs::write(&path, b"NOTPRIME\x02\x00\x00\x00\x00\x00\x00\x00").unwrap();
        assert!(matches!(
            PrimeTable::load(&path),
            Err(PrimeTableError::BadMagic { .. })
        ));
    }
}
