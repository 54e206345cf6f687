//! Parameter sets and their validation rules.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Upper bounds accepted by [`Params::validate`]. These are implementation
/// limits (keeping every derived quantity comfortably inside native integer
/// widths), not cryptographic recommendations.
pub const MAX_N: u32 = 1 << 20;
pub const MAX_M: u32 = 1 << 20;
pub const MAX_K: u32 = 1 << 10;
pub const MAX_B: u32 = 31;
pub const MAX_Q: u32 = 32;

/// Encryption method selector.
///
/// * `M2` — one bit per block, signalled by swapping a balanced or an
///   unbalanced literal pair.
/// * `M3` — `b` bits per block, signalled by the absolute pair difference of
///   a swapped pair.
/// * `M4` — `b` bits per block over a divided-clause key, signalled by the
///   mix of clauses drawn from the two groups (no swap).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    M2,
    M3,
    M4,
}

impl Mode {
    /// Stable numeric tag used in file headers.
    pub fn code(self) -> u8 {
        match self {
            Mode::M2 => 2,
            Mode::M3 => 3,
            Mode::M4 => 4,
        }
    }

    /// Inverse of [`Mode::code`].
    pub fn from_code(code: u8) -> Option<Mode> {
        match code {
            2 => Some(Mode::M2),
            3 => Some(Mode::M3),
            4 => Some(Mode::M4),
            _ => None,
        }
    }

    /// Whether this mode operates over a divided-clause key.
    pub fn is_divided(self) -> bool {
        matches!(self, Mode::M4)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::M2 => write!(f, "m2"),
            Mode::M3 => write!(f, "m3"),
            Mode::M4 => write!(f, "m4"),
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s.to_ascii_lowercase().as_str() {
            "m2" | "2" => Ok(Mode::M2),
            "m3" | "3" => Ok(Mode::M3),
            "m4" | "4" => Ok(Mode::M4),
            other => Err(Error::InvalidParams(format!("unknown mode {other:?}"))),
        }
    }
}

/// A full parameter set.
///
/// | field | meaning |
/// |-------|---------|
/// | `k`   | TRUE literals per clause under the private key |
/// | `n`   | number of variables |
/// | `m`   | occurrences of each literal across the key |
/// | `b`   | plaintext bits per block (always 1 for `M2`) |
/// | `e`   | clauses extracted per block |
/// | `q`   | serialized bits per spectrum count |
/// | `mode`| encryption method |
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Params {
    pub k: u32,
    pub n: u32,
    pub m: u32,
    pub b: u32,
    pub e: u32,
    pub q: u32,
    pub mode: Mode,
}

impl Params {
    /// Builds and validates a parameter set in one step.
    #[allow(clippy::too_many_arguments)]
    pub fn new(mode: Mode, k: u32, n: u32, m: u32, b: u32, e: u32, q: u32) -> Result<Params> {
        let params = Params { k, n, m, b, e, q, mode };
        params.validate()?;
        Ok(params)
    }

    /// Checks every structural rule. All other routines may assume a
    /// validated set.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidParams(msg));

        for (name, value, max) in [
            ("k", self.k, MAX_K),
            ("n", self.n, MAX_N),
            ("m", self.m, MAX_M),
            ("b", self.b, MAX_B),
            ("e", self.e, u32::MAX),
            ("q", self.q, MAX_Q),
        ] {
            if value == 0 {
                return fail(format!("{name} must be positive"));
            }
            if value > max {
                return fail(format!("{name}={value} exceeds supported maximum {max}"));
            }
        }

        let mn = u64::from(self.m) * u64::from(self.n);
        match self.mode {
            Mode::M2 | Mode::M3 => {
                if u64::from(2 * self.k) > u64::from(self.n) {
                    return fail(format!(
                        "clause width 2k={} exceeds variable count n={}",
                        2 * self.k,
                        self.n
                    ));
                }
                if mn % u64::from(self.k) != 0 {
                    return fail(format!(
                        "k={} must divide m*n={mn} to consume the literal pools exactly",
                        self.k
                    ));
                }
                if self.mode == Mode::M2 && self.b != 1 {
                    return fail(format!("mode m2 carries one bit per block, got b={}", self.b));
                }
                if self.mode == Mode::M3 && (1u64 << self.b) > u64::from(self.m) {
                    return fail(format!(
                        "mode m3 needs 2^b <= m to represent every block value, got b={} m={}",
                        self.b, self.m
                    ));
                }
            }
            Mode::M4 => {
                let width = u64::from(2 * self.k + 1);
                if width > u64::from(self.n) {
                    return fail(format!(
                        "clause width 2k+1={width} exceeds variable count n={}",
                        self.n
                    ));
                }
                if u64::from(self.e) != 1u64 << self.b {
                    return fail(format!(
                        "mode m4 requires e = 2^b, got e={} b={}",
                        self.e, self.b
                    ));
                }
                if u64::from(self.e) > self.group_clause_count() {
                    return fail(format!(
                        "extraction count e={} exceeds per-group clause count {}",
                        self.e,
                        self.group_clause_count()
                    ));
                }
            }
        }

        if u64::from(self.e) > self.clause_count() {
            return fail(format!(
                "extraction count e={} exceeds clause count {}",
                self.e,
                self.clause_count()
            ));
        }

        Ok(())
    }

    /// Literals per clause: `2k`, or `2k + 1` for divided keys.
    pub fn clause_width(&self) -> u32 {
        match self.mode {
            Mode::M2 | Mode::M3 => 2 * self.k,
            Mode::M4 => 2 * self.k + 1,
        }
    }

    /// Total number of clauses in a key: `m*n/k`, or `2 * floor(m*n/(2k+1))`
    /// for divided keys.
    pub fn clause_count(&self) -> u64 {
        let mn = u64::from(self.m) * u64::from(self.n);
        match self.mode {
            Mode::M2 | Mode::M3 => mn / u64::from(self.k),
            Mode::M4 => 2 * (mn / u64::from(2 * self.k + 1)),
        }
    }

    /// Clauses per group for divided keys: `floor(m*n/(2k+1))`. For undivided
    /// keys this is simply the clause count.
    pub fn group_clause_count(&self) -> u64 {
        match self.mode {
            Mode::M2 | Mode::M3 => self.clause_count(),
            Mode::M4 => u64::from(self.m) * u64::from(self.n) / u64::from(2 * self.k + 1),
        }
    }

    /// Plaintext bits carried by one ciphertext block.
    pub fn bits_per_block(&self) -> u32 {
        match self.mode {
            Mode::M2 => 1,
            Mode::M3 | Mode::M4 => self.b,
        }
    }

    /// Number of blocks required for a message of `bit_len` plaintext bits.
    pub fn block_count(&self, bit_len: u64) -> u64 {
        bit_len.div_ceil(u64::from(self.bits_per_block()))
    }

    /// Largest spectrum count representable in `q` serialized bits.
    pub fn count_cap(&self) -> u32 {
        if self.q >= 32 {
            u32::MAX
        } else {
            (1u32 << self.q) - 1
        }
    }

    /// Number of distinct values a block can carry (`2^bits_per_block`).
    pub fn block_values(&self) -> u64 {
        1u64 << self.bits_per_block()
    }

    /// Compact human-readable tag, e.g. `m3-n512-m20-k4-b4-e768-q4`.
    pub fn label(&self) -> String {
        format!(
            "{}-n{}-m{}-k{}-b{}-e{}-q{}",
            self.mode, self.n, self.m, self.k, self.b, self.e, self.q
        )
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "mode={} k={} n={} m={} b={} e={} q={}",
            self.mode, self.k, self.n, self.m, self.b, self.e, self.q
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn paper_m2() -> Params {
        Params::new(Mode::M2, 4, 512, 20, 1, 768, 4).expect("paper m2 params are valid")
    }

    #[test]
    fn accepts_the_reference_parameter_sets() {
        let m2 = paper_m2();
        assert_eq!(m2.clause_count(), 2560);
        assert_eq!(m2.clause_width(), 8);
        assert_eq!(m2.bits_per_block(), 1);

        let m3 = Params::new(Mode::M3, 4, 512, 20, 4, 768, 4).expect("paper m3 params are valid");
        assert_eq!(m3.bits_per_block(), 4);
        assert_eq!(m3.block_values(), 16);

        let m4 = Params::new(Mode::M4, 2, 40, 2, 4, 16, 4).expect("small m4 params are valid");
        assert_eq!(m4.group_clause_count(), 16);
        assert_eq!(m4.clause_count(), 32);
        assert_eq!(m4.clause_width(), 5);
    }

    #[test]
    fn rejects_zero_fields() {
        for field in 0..6 {
            let mut p = paper_m2();
            match field {
                0 => p.k = 0,
                1 => p.n = 0,
                2 => p.m = 0,
                3 => p.b = 0,
                4 => p.e = 0,
                _ => p.q = 0,
            }
            assert!(matches!(p.validate(), Err(Error::InvalidParams(_))), "field {field}");
        }
    }

    #[test]
    fn rejects_mode_specific_violations() {
        // m2 with b != 1
        let mut p = paper_m2();
        p.b = 2;
        assert!(p.validate().is_err());

        // m3 with 2^b > m
        let p = Params { mode: Mode::M3, k: 4, n: 512, m: 15, b: 4, e: 768, q: 4 };
        assert!(p.validate().is_err());

        // clause width wider than n
        let p = Params { mode: Mode::M2, k: 5, n: 8, m: 5, b: 1, e: 4, q: 4 };
        assert!(p.validate().is_err());

        // k does not divide m*n
        let p = Params { mode: Mode::M2, k: 3, n: 8, m: 2, b: 1, e: 4, q: 4 };
        assert!(p.validate().is_err());

        // m4 with e != 2^b
        let p = Params { mode: Mode::M4, k: 2, n: 40, m: 2, b: 4, e: 12, q: 4 };
        assert!(p.validate().is_err());

        // m4 with e exceeding the group size (g = 2*30/5 = 12 < 16)
        let p = Params { mode: Mode::M4, k: 2, n: 30, m: 2, b: 4, e: 16, q: 4 };
        assert!(p.validate().is_err());

        // extraction larger than the formula
        let mut p = paper_m2();
        p.e = 2561;
        assert!(p.validate().is_err());
    }

    #[test]
    fn count_cap_saturates_at_q32() {
        let mut p = paper_m2();
        assert_eq!(p.count_cap(), 15);
        p.q = 32;
        assert_eq!(p.count_cap(), u32::MAX);
    }
}
