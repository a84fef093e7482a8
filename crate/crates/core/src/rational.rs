//! Exact rational helpers: parsing "p/q" strings and serde as strings.

use crate::error::{Error, Result};
use num_rational::Rational64;
use num_traits::ToPrimitive;

/// Parses "p/q", an integer, or a finite decimal such as "-0.75" exactly.
pub fn parse(text: &str) -> Result<Rational64> {
    let t = text.trim();
    let bad = || Error::InvalidParameter(format!("not a rational: `{text}`"));
    if let Some((p, q)) = t.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Rational64::new(p, q));
    }
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || frac.len() > 15 || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let whole: i64 = if int.is_empty() || int == "-" || int == "+" {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let den = 10i64.pow(frac.len() as u32);
        let num: i64 = frac.parse().map_err(|_| bad())?;
        let mag = whole.abs() * den + num;
        return Ok(Rational64::new(if negative { -mag } else { mag }, den));
    }
    t.parse::<i64>().map(Rational64::from_integer).map_err(|_| bad())
}

pub fn to_f64(r: Rational64) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Renders `p/q`, or just `p` when the denominator is one.
pub fn render(r: Rational64) -> String {
    r.to_string()
}

pub mod serde_str {
    use num_rational::Rational64;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::render(*r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational64, D::Error> {
        let text = String::deserialize(d)?;
        super::parse(&text).map_err(serde::de::Error::custom)
    }
}

pub mod serde_opt_str {
    use num_rational::Rational64;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Rational64>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_str(&super::render(*r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational64>, D::Error> {
        let text = Option::<String>::deserialize(d)?;
        text.map(|t| super::parse(&t).map_err(serde::de::Error::custom))
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_integers_and_decimals() {
        assert_eq!(parse("-13/12").unwrap(), Rational64::new(-13, 12));
        assert_eq!(parse("4").unwrap(), Rational64::from_integer(4));
        assert_eq!(parse("-0.75").unwrap(), Rational64::new(-3, 4));
        assert_eq!(parse("-.5").unwrap(), Rational64::new(-1, 2));
        assert_eq!(parse("1.2").unwrap(), Rational64::new(6, 5));
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
    }

    #[test]
    fn renders_reduced_form() {
        assert_eq!(render(Rational64::new(-26, 24)), "-13/12");
        assert_eq!(render(Rational64::from_integer(0)), "0");
    }
}
