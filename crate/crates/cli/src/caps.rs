//! Player-count caps. Dense lattices cost 2^n doubles, so the CLI refuses
//! oversized requests up front instead of letting an allocation stall the
//! machine. The default cap can be raised via `HARSANYI_MAX_N`, but never
//! beyond the hard cap baked into the core layout.

use harsanyi_core::{Error, Result};

pub const MAX_N_ENV: &str = "HARSANYI_MAX_N";
pub const DEFAULT_MAX_N: u32 = 20;
pub const HARD_MAX_N: u32 = 24;

/// Resolve the effective cap from an environment value. Values above the
/// hard cap clamp to it; missing or unusable values fall back to the default.
pub fn effective_max_n(env_value: Option<&str>) -> u32 {
    match env_value {
        Some(raw) => match raw.trim().parse::<u32>() {
            Ok(v) if v >= 1 => v.min(HARD_MAX_N),
            _ => {
                eprintln!("warning: ignoring unusable {MAX_N_ENV}={raw:?}; using {DEFAULT_MAX_N}");
                DEFAULT_MAX_N
            }
        },
        None => DEFAULT_MAX_N,
    }
}

/// Read the cap from the process environment.
pub fn max_n_from_env() -> u32 {
    effective_max_n(std::env::var(MAX_N_ENV).ok().as_deref())
}

pub fn check_cap(n: u32, cap: u32) -> Result<()> {
    if n > cap {
        return Err(Error::precondition(format!(
            "n={n} exceeds the player cap {cap}; set {MAX_N_ENV} to raise it (hard cap {HARD_MAX_N})"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn env_parsing() {
        assert_eq!(effective_max_n(None), 20);
        assert_eq!(effective_max_n(Some("12")), 12);
        assert_eq!(effective_max_n(Some(" 8 ")), 8);
        assert_eq!(effective_max_n(Some("24")), 24);
        assert_eq!(effective_max_n(Some("100")), 24);
        assert_eq!(effective_max_n(Some("0")), 20);
        assert_eq!(effective_max_n(Some("banana")), 20);
    }

    #[test]
    fn cap_enforcement() {
        assert!(check_cap(20, 20).is_ok());
        assert!(check_cap(21, 20).is_err());
        assert!(check_cap(5, 4).is_err());
    }
}
