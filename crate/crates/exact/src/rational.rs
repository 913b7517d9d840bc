use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::ExactError;

/// Arbitrary-precision rational, always stored reduced with positive denominator.
pub type Rational = BigRational;

/// Parses `INT`, `INT/INT` or a finite decimal such as `-2.5e-3`, exactly.
pub fn parse_rational(text: &str) -> Result<Rational, ExactError> {
    let bad = || ExactError::BadRational(text.to_string());
    let t = text.trim();
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        return Ok(Rational::new(n, d));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = t[pos + 1..].parse().map_err(|_| bad())?;
            (&t[..pos], e)
        }
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(all.parse::<BigInt>().map_err(|_| bad())?);
    let shift = exponent - frac_part.len() as i64;
    let ten = Rational::from_integer(BigInt::from(10));
    if shift >= 0 {
        value *= num_traits::pow(ten, shift as usize);
    } else {
        value /= num_traits::pow(ten, (-shift) as usize);
    }
    Ok(if neg { -value } else { value })
}

/// Nearest `f64`; saturates to +-inf for huge values.
pub fn rational_to_f64(q: &Rational) -> f64 {
    if let Some(v) = q.to_f64() {
        return v;
    }
    let n = q.numer().to_f64().unwrap_or(f64::INFINITY);
    let d = q.denom().to_f64().unwrap_or(f64::INFINITY);
    n / d
}

/// The exact dyadic value of a finite float.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

/// `p/q` or `p` when the denominator is one.
pub fn rational_to_string(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
pub(crate) fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Content of a list of rationals: `gcd(numerators) / lcm(denominators)`,
/// carrying the sign of `sign_of`. Returns one for an empty list.
pub(crate) fn content<'a>(
    coeffs: impl Iterator<Item = &'a Rational>,
    sign_of: Option<&Rational>,
) -> Rational {
    use num_integer::Integer;
    let mut g = BigInt::zero();
    let mut l = BigInt::one();
    for c in coeffs {
        g = g.gcd(c.numer());
        l = l.lcm(c.denom());
    }
    if g.is_zero() {
        return Rational::one();
    }
    let c = Rational::new(g, l);
    match sign_of {
        Some(s) if s.is_negative() => -c,
        _ => c,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_literal_forms() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("-6/4").unwrap(), Rational::new((-3).into(), 2.into()));
        assert_eq!(parse_rational("0.25").unwrap(), Rational::new(1.into(), 4.into()));
        assert_eq!(parse_rational("2.5e-3").unwrap(), Rational::new(1.into(), 400.into()));
        assert_eq!(parse_rational("1e2").unwrap(), int(100));
        assert_eq!(parse_rational(".5").unwrap(), Rational::new(1.into(), 2.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1.2.3").is_err());
    }

    #[test]
    fn float_round_trip_is_exact() {
        let q = rational_from_f64(0.1).unwrap();
        assert_eq!(rational_to_f64(&q), 0.1);
        assert_ne!(q, Rational::new(1.into(), 10.into()));
    }
}
