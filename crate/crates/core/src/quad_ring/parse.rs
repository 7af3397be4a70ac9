//! Textual form of ring and field elements.
//!
//! A `QuadInt` is written `u+v*w` where `w` is the basis element of the ring
//! (`√−2` for D = 2, `ω = (1+√−D)/2` for D = 7, 11). The parser is lenient:
//! `3`, `w`, `-w`, `2w`, `0+1w`, `4 - 3*w` are all accepted. A `KElem` is
//! written `num/den`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use super::{Coord, KElem, QuadInt, RingError, RingSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty input")]
    Empty,
    #[error("malformed term `{0}`")]
    BadTerm(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

impl<T: Coord> QuadInt<T> {
    pub fn parse(ring: RingSpec, s: &str) -> Result<Self, ParseError> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(ParseError::Empty);
        }
        let mut u = BigInt::zero();
        let mut v = BigInt::zero();
        let mut start = 0;
        let bytes = s.as_bytes();
        for i in 1..=bytes.len() {
            let at_split = i == bytes.len() || (matches!(bytes[i], b'+' | b'-') && bytes[i - 1] != b'*');
            if !at_split {
                continue;
            }
            let term = &s[start..i];
            start = i;
            let (neg, body) = match term.as_bytes()[0] {
                b'+' => (false, &term[1..]),
                b'-' => (true, &term[1..]),
                _ => (false, term),
            };
            let bad = || ParseError::BadTerm(term.to_string());
            let (coef, is_w) = match body.strip_suffix('w') {
                Some(c) => {
                    let c = c.strip_suffix('*').unwrap_or(c);
                    let coef = if c.is_empty() {
                        BigInt::from(1)
                    } else {
                        BigInt::from_str(c).map_err(|_| bad())?
                    };
                    (coef, true)
                }
                None => (BigInt::from_str(body).map_err(|_| bad())?, false),
            };
            let coef = if neg { -coef } else { coef };
            if is_w {
                v += coef;
            } else {
                u += coef;
            }
        }
        let cvt = |x: &BigInt| T::from_bigint(x).ok_or(ParseError::Ring(RingError::Overflow));
        Ok(QuadInt::new(ring, cvt(&u)?, cvt(&v)?))
    }
}

impl<T: Coord> KElem<T> {
    /// `num/den` or a bare integer.
    pub fn parse(ring: RingSpec, s: &str) -> Result<Self, ParseError> {
        match s.split_once('/') {
            Some((n, d)) => Ok(KElem::new(QuadInt::parse(ring, n)?, QuadInt::parse(ring, d)?)?),
            None => Ok(KElem::from_int(QuadInt::parse(ring, s)?)),
        }
    }
}
