//! Exact rational numbers.
//!
//! Every cost and every LP value in the crate is a [`Rat`]. The alias is
//! backed by `num_rational::BigRational`, which keeps values in lowest terms
//! with a positive denominator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rat = BigRational;

/// `num / den` as a [`Rat`]. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rat {
    assert!(den != 0, "zero denominator");
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

pub fn half() -> Rat {
    rat(1, 2)
}

/// Lossy decimal rendering, for reports only.
pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `"a"` for integers, `"a/b"` otherwise.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"a"`, `"a/b"` or a finite decimal such as `"-1.25"`.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rat::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        let digits = format!("{}{}", if whole_digits.is_empty() { "0" } else { whole_digits }, frac);
        let mut n: BigInt = digits.parse().ok()?;
        if negative {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10), frac.len());
        return Some(Rat::new(n, d));
    }
    let n: BigInt = s.parse().ok()?;
    Some(Rat::from_integer(n))
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// Rescales `values` to integers over `den` and narrows them to `i128`.
///
/// Returns `None` when `den` is not a common denominator or a numerator does
/// not fit. Callers fall back to an error rather than losing exactness.
pub fn scale_to_i128<'a>(values: impl IntoIterator<Item = &'a Rat>, den: &BigInt) -> Option<Vec<i128>> {
    values
        .into_iter()
        .map(|r| {
            let scaled = r * Rat::from_integer(den.clone());
            if !scaled.is_integer() {
                return None;
            }
            scaled.to_integer().to_i128()
        })
        .collect()
}

/// Largest magnitude among `values`, or zero for an empty input.
pub fn max_abs<'a>(values: impl IntoIterator<Item = &'a Rat>) -> Rat {
    values.into_iter().map(|r| r.abs()).max().unwrap_or_else(zero)
}

pub fn sum<'a>(values: impl IntoIterator<Item = &'a Rat>) -> Rat {
    values.into_iter().fold(zero(), |acc, r| acc + r)
}

/// Serde adapter storing a [`Rat`] as `[num, den]`.
///
/// Components are JSON integers when they fit in `i64` and decimal strings
/// otherwise, so the encoding round-trips bit-exactly.
pub mod pair {
    use super::*;
    use serde::de::{self, Deserializer};
    use serde::ser::{SerializeTuple, Serializer};
    use serde::Deserialize;

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Component {
        Int(i64),
        Text(String),
    }

    impl Component {
        fn into_bigint<E: de::Error>(self) -> Result<BigInt, E> {
            match self {
                Component::Int(v) => Ok(BigInt::from(v)),
                Component::Text(s) => s.parse().map_err(|_| E::custom(format!("bad integer `{s}`"))),
            }
        }
    }

    fn write_component<S: SerializeTuple>(t: &mut S, v: &BigInt) -> Result<(), S::Error> {
        match v.to_i64() {
            Some(small) => t.serialize_element(&small),
            None => t.serialize_element(&v.to_string()),
        }
    }

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(2)?;
        write_component(&mut t, r.numer())?;
        write_component(&mut t, r.denom())?;
        t.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let (n, den) = <(Component, Component)>::deserialize(d)?;
        let n = n.into_bigint()?;
        let den = den.into_bigint()?;
        if den.is_zero() {
            return Err(de::Error::custom("zero denominator"));
        }
        Ok(Rat::new(n, den))
    }

    /// Same encoding for `Vec<Rat>`.
    pub mod vec {
        use super::*;
        use serde::Serialize;

        #[derive(Serialize, Deserialize)]
        struct Wrap(#[serde(with = "super")] Rat);

        pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
            let wrapped: Vec<Wrap> = v.iter().cloned().map(Wrap).collect();
            wrapped.serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
            let wrapped = Vec::<Wrap>::deserialize(d)?;
            Ok(wrapped.into_iter().map(|w| w.0).collect())
        }
    }
}

/// Serde adapter storing a [`Rat`] as the string `"a/b"`.
pub mod text {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).ok_or_else(|| de::Error::custom(format!("bad rational `{s}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn lowest_terms_and_positive_denominator() {
        let r = rat(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
    }

    #[test]
    fn parses_all_forms() {
        assert_eq!(parse_rat("3"), Some(int(3)));
        assert_eq!(parse_rat(" -2/6 "), Some(rat(-1, 3)));
        assert_eq!(parse_rat("1.25"), Some(rat(5, 4)));
        assert_eq!(parse_rat("-0.5"), Some(rat(-1, 2)));
        assert_eq!(parse_rat("1/0"), None);
        assert_eq!(parse_rat("abc"), None);
        assert_eq!(parse_rat("1."), None);
    }

    #[test]
    fn formats() {
        assert_eq!(fmt_rat(&rat(10, 9)), "10/9");
        assert_eq!(fmt_rat(&int(-4)), "-4");
    }

    #[test]
    fn scaling_is_exact() {
        let v = vec![rat(1, 9), rat(4, 9), rat(-2, 3)];
        let d = common_denominator(&v);
        assert_eq!(d, BigInt::from(9));
        assert_eq!(scale_to_i128(&v, &d), Some(vec![1, 4, -6]));
        assert_eq!(scale_to_i128(&v, &BigInt::from(3)), None);
    }

    #[test]
    fn pair_serde_round_trip_with_big_components() {
        #[derive(serde::Serialize, serde::Deserialize, PartialEq, Debug)]
        struct W(#[serde(with = "pair")] Rat);
        let big = Rat::new(BigInt::from(u64::MAX) * 7, BigInt::from(3));
        for r in [rat(-7, 3), big] {
            let s = serde_json::to_string(&W(r.clone())).unwrap();
            let back: W = serde_json::from_str(&s).unwrap();
            assert_eq!(back.0, r);
        }
        assert_eq!(serde_json::to_string(&W(rat(1, 2))).unwrap(), "[1,2]");
    }

    proptest! {
        #[test]
        fn addition_is_exact(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let s = rat(a, b) + rat(c, d);
            prop_assert_eq!(s * int(b * d), int(a * d + c * b));
        }
    }
}
