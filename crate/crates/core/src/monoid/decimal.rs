//! Exact fixed-point decimals.
//!
//! The min/max monoids never create new values, so parsing inputs to a
//! canonical finite-precision form keeps every comparison exact. Six
//! fractional digits are supported; anything finer is rejected rather
//! than rounded.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

const SCALE: i64 = 1_000_000;
const FRAC_DIGITS: usize = 6;

/// A decimal number stored as an integer count of millionths.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Decimal(i64);

impl Decimal {
    pub const ZERO: Decimal = Decimal(0);
    pub const ONE: Decimal = Decimal(SCALE);

    pub fn from_int(n: i64) -> Decimal {
        Decimal(n * SCALE)
    }

    pub fn is_zero(&self) -> bool {
        self.0 == 0
    }

    pub fn min(self, other: Decimal) -> Decimal {
        Decimal(self.0.min(other.0))
    }

    pub fn max(self, other: Decimal) -> Decimal {
        Decimal(self.0.max(other.0))
    }
}

impl FromStr for Decimal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Decimal, Error> {
        let bad = || Error::InvalidElement {
            monoid: "decimal".into(),
            repr: s.into(),
        };
        let (sign, digits) = match s.strip_prefix('-') {
            Some(rest) => (-1i64, rest),
            None => (1i64, s),
        };
        let (int_part, frac_part) = match digits.split_once('.') {
            Some((i, f)) => (i, f),
            None => (digits, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if frac_part.len() > FRAC_DIGITS {
            return Err(bad());
        }
        let valid = |p: &str| p.chars().all(|c| c.is_ascii_digit());
        if !valid(int_part) || !valid(frac_part) {
            return Err(bad());
        }
        let int: i64 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| bad())?
        };
        let mut frac: i64 = 0;
        for c in frac_part.chars() {
            frac = frac * 10 + (c as u8 - b'0') as i64;
        }
        frac *= 10i64.pow((FRAC_DIGITS - frac_part.len()) as u32);
        int.checked_mul(SCALE)
            .and_then(|units| units.checked_add(frac))
            .map(|units| Decimal(sign * units))
            .ok_or_else(bad)
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let units = self.0.unsigned_abs();
        let int = units / SCALE as u64;
        let mut frac = units % SCALE as u64;
        if self.0 < 0 {
            write!(f, "-")?;
        }
        if frac == 0 {
            return write!(f, "{int}");
        }
        let mut digits = FRAC_DIGITS;
        while frac % 10 == 0 {
            frac /= 10;
            digits -= 1;
        }
        write!(f, "{int}.{frac:0width$}", width = digits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip_is_canonical() {
        for s in ["0", "1", "4.5", "0.25", "-1.5", "10.000001"] {
            let d: Decimal = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
        // non-canonical spellings normalize
        assert_eq!("4.50".parse::<Decimal>().unwrap().to_string(), "4.5");
        assert_eq!("00.5".parse::<Decimal>().unwrap().to_string(), "0.5");
    }

    #[test]
    fn rejects_garbage_and_excess_precision() {
        assert!("".parse::<Decimal>().is_err());
        assert!(".".parse::<Decimal>().is_err());
        assert!("1.2345678".parse::<Decimal>().is_err());
        assert!("1e3".parse::<Decimal>().is_err());
    }

    #[test]
    fn ordering_matches_numeric_order() {
        let parse = |s: &str| s.parse::<Decimal>().unwrap();
        assert!(parse("-1.5") < parse("0"));
        assert!(parse("0.999999") < parse("1"));
        assert_eq!(parse("2").max(parse("4.0")), parse("4"));
    }
}
