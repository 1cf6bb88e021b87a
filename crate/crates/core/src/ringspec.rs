//! Textual ring specifications.
//!
//! ```text
//! spec   := factor ("x" factor)*          left associative
//! factor := "Z" nat
//!         | "M" nat "(" spec ")"
//!         | "T" nat "(" spec ")"
//!         | "(" spec ")"
//! ```
//!
//! Keywords are case-insensitive and whitespace is ignored. `M2(Z3)xZ2` is the
//! product of the 2x2 matrices over `Z/3` with `Z/2`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::error::RingError;
use crate::ring::{make_matrix_ring, make_product_ring, make_triangular_ring, make_zmod_with, FiniteRing, Limits};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingSpec {
    Zmod(u32),
    Matrix(u32, Box<RingSpec>),
    Triangular(u32, Box<RingSpec>),
    Product(Box<RingSpec>, Box<RingSpec>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax { expected: Vec<&'static str>, found: String },
    ZeroModulus,
    ZeroDimension,
    NumberTooLarge,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("ring spec error at byte {offset}: {}", describe(.kind))]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

fn describe(kind: &ParseErrorKind) -> String {
    match kind {
        ParseErrorKind::Syntax { expected, found } => {
            format!("expected one of {}, found {found}", expected.join(" "))
        }
        ParseErrorKind::ZeroModulus => "Z requires n >= 1".into(),
        ParseErrorKind::ZeroDimension => "matrix dimension must be at least 1".into(),
        ParseErrorKind::NumberTooLarge => "number does not fit in 32 bits".into(),
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).map(|b| b.to_ascii_uppercase())
    }

    fn found(&mut self) -> String {
        match self.peek() {
            None => "end of input".into(),
            Some(_) => {
                let rest = std::str::from_utf8(&self.src[self.pos..]).unwrap_or("?");
                format!("'{}'", rest.chars().next().unwrap_or('?'))
            }
        }
    }

    fn syntax(&mut self, expected: &[&'static str]) -> ParseError {
        let found = self.found();
        ParseError { offset: self.pos, kind: ParseErrorKind::Syntax { expected: expected.to_vec(), found } }
    }

    fn expect(&mut self, byte: u8, name: &'static str) -> Result<(), ParseError> {
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(&[name]))
        }
    }

    fn nat(&mut self) -> Result<(usize, u32), ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax(&["number"]));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        digits
            .parse::<u32>()
            .map(|n| (start, n))
            .map_err(|_| ParseError { offset: start, kind: ParseErrorKind::NumberTooLarge })
    }

    fn spec(&mut self) -> Result<RingSpec, ParseError> {
        let mut lhs = self.factor()?;
        while self.peek() == Some(b'X') {
            self.pos += 1;
            let rhs = self.factor()?;
            lhs = RingSpec::Product(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<RingSpec, ParseError> {
        match self.peek() {
            Some(b'Z') => {
                self.pos += 1;
                let (at, n) = self.nat()?;
                if n == 0 {
                    return Err(ParseError { offset: at, kind: ParseErrorKind::ZeroModulus });
                }
                Ok(RingSpec::Zmod(n))
            }
            Some(kw @ (b'M' | b'T')) => {
                self.pos += 1;
                let (at, k) = self.nat()?;
                if k == 0 {
                    return Err(ParseError { offset: at, kind: ParseErrorKind::ZeroDimension });
                }
                self.expect(b'(', "'('")?;
                let inner = Box::new(self.spec()?);
                self.expect(b')', "')'")?;
                Ok(if kw == b'M' { RingSpec::Matrix(k, inner) } else { RingSpec::Triangular(k, inner) })
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.spec()?;
                self.expect(b')', "')'")?;
                Ok(inner)
            }
            _ => Err(self.syntax(&["'Z'", "'M'", "'T'", "'('"])),
        }
    }
}

/// Parse a ring specification.
pub fn parse_ring_spec(text: &str) -> Result<RingSpec, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let spec = p.spec()?;
    if p.peek().is_some() {
        return Err(p.syntax(&["'x'", "end of input"]));
    }
    Ok(spec)
}

impl FromStr for RingSpec {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_ring_spec(s)
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Zmod(n) => write!(f, "Z{n}"),
            RingSpec::Matrix(k, inner) => write!(f, "M{k}({inner})"),
            RingSpec::Triangular(k, inner) => write!(f, "T{k}({inner})"),
            RingSpec::Product(l, r) => match **r {
                RingSpec::Product(..) => write!(f, "{l}x({r})"),
                _ => write!(f, "{l}x{r}"),
            },
        }
    }
}

impl RingSpec {
    /// Number of elements, saturating at `u128::MAX`.
    pub fn cardinality(&self) -> u128 {
        match self {
            RingSpec::Zmod(n) => *n as u128,
            RingSpec::Matrix(k, inner) => pow_sat(inner.cardinality(), (*k as u128).saturating_mul(*k as u128)),
            RingSpec::Triangular(k, inner) => {
                let k = *k as u128;
                pow_sat(inner.cardinality(), k.saturating_mul(k + 1) / 2)
            }
            RingSpec::Product(l, r) => l.cardinality().saturating_mul(r.cardinality()),
        }
    }

    /// Build the ring, refusing anything above the size cap before allocating.
    pub fn instantiate(&self, limits: &Limits) -> Result<FiniteRing, RingError> {
        let cardinality = self.cardinality();
        if cardinality > limits.size_cap as u128 {
            return Err(RingError::CapExceeded { cardinality, cap: limits.size_cap });
        }
        self.build(limits)
    }

    fn build(&self, limits: &Limits) -> Result<FiniteRing, RingError> {
        match self {
            RingSpec::Zmod(n) => make_zmod_with(*n, limits),
            RingSpec::Matrix(k, inner) => make_matrix_ring(*k as usize, &inner.build(limits)?, limits),
            RingSpec::Triangular(k, inner) => make_triangular_ring(*k as usize, &inner.build(limits)?, limits),
            RingSpec::Product(l, r) => make_product_ring(&l.build(limits)?, &r.build(limits)?, limits),
        }
    }
}

fn pow_sat(base: u128, exp: u128) -> u128 {
    match base {
        0 | 1 => base,
        _ => u32::try_from(exp).ok().and_then(|e| base.checked_pow(e)).unwrap_or(u128::MAX),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn matrix_over_z4() {
        let s = parse_ring_spec("M2(Z4)").unwrap();
        assert_eq!(s, RingSpec::Matrix(2, Box::new(RingSpec::Zmod(4))));
        assert_eq!(s.cardinality(), 256);
        assert_eq!(parse_ring_spec("M2(Z16)").unwrap().cardinality(), 65536);
    }

    #[test]
    fn product_is_left_associative() {
        let s = parse_ring_spec("Z2xZ3").unwrap();
        assert_eq!(s, RingSpec::Product(Box::new(RingSpec::Zmod(2)), Box::new(RingSpec::Zmod(3))));
        assert_eq!(s.cardinality(), 6);
        let s = parse_ring_spec("z2 X z3 x z5").unwrap();
        assert_eq!(s.to_string(), "Z2xZ3xZ5");
        let grouped = parse_ring_spec("Z2x(Z3xZ5)").unwrap();
        assert_ne!(s, grouped);
        assert_eq!(grouped.to_string(), "Z2x(Z3xZ5)");
    }

    #[test]
    fn zero_modulus_rejected() {
        let err = parse_ring_spec("Z0").unwrap_err();
        assert_eq!(err, ParseError { offset: 1, kind: ParseErrorKind::ZeroModulus });
        assert_eq!(parse_ring_spec("M0(Z2)").unwrap_err().kind, ParseErrorKind::ZeroDimension);
    }

    #[test]
    fn syntax_errors_carry_offset_and_expectations() {
        let err = parse_ring_spec("M2(Z3").unwrap_err();
        assert_eq!(err.offset, 5);
        assert_eq!(err.kind, ParseErrorKind::Syntax { expected: vec!["')'"], found: "end of input".into() });
        let err = parse_ring_spec("Q5").unwrap_err();
        assert_eq!(err.offset, 0);
        assert!(matches!(err.kind, ParseErrorKind::Syntax { ref expected, .. } if expected.contains(&"'Z'")));
        let err = parse_ring_spec("Z2 Z3").unwrap_err();
        assert_eq!(err.offset, 3);
        assert!(parse_ring_spec("Z99999999999").is_err());
        assert!(parse_ring_spec("").is_err());
    }

    #[test]
    fn cap_is_checked_before_building() {
        let s = parse_ring_spec("M4(Z100)").unwrap();
        let err = s.instantiate(&Limits::default()).unwrap_err();
        assert_eq!(err, RingError::CapExceeded { cardinality: 100u128.pow(16), cap: Limits::default().size_cap });
        let huge = parse_ring_spec("M9(M9(Z1000))").unwrap();
        assert_eq!(huge.cardinality(), u128::MAX);
    }

    #[test]
    fn names_match_constructed_rings() {
        for text in crate::theorem::CURATED_FAMILY {
            let spec = parse_ring_spec(text).unwrap();
            let ring = spec.instantiate(&Limits::default()).unwrap();
            assert_eq!(ring.name(), text);
            assert_eq!(ring.size() as u128, spec.cardinality());
        }
    }

    fn arb_spec() -> impl Strategy<Value = RingSpec> {
        let leaf = (1u32..50).prop_map(RingSpec::Zmod);
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (1u32..4, inner.clone()).prop_map(|(k, s)| RingSpec::Matrix(k, Box::new(s))),
                (1u32..4, inner.clone()).prop_map(|(k, s)| RingSpec::Triangular(k, Box::new(s))),
                (inner.clone(), inner).prop_map(|(l, r)| RingSpec::Product(Box::new(l), Box::new(r))),
            ]
        })
    }

    fn noisy(text: &str, seed: u64) -> String {
        let mut out = String::new();
        let mut prev_digit = false;
        for (i, ch) in text.chars().enumerate() {
            let h = seed.wrapping_mul(6364136223846793005).wrapping_add(i as u64);
            let inside_number = prev_digit && ch.is_ascii_digit();
            prev_digit = ch.is_ascii_digit();
            if h.is_multiple_of(5) && !inside_number {
                out.push(' ');
            }
            out.push(if h.is_multiple_of(3) { ch.to_ascii_lowercase() } else { ch });
        }
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn print_parse_round_trip(spec in arb_spec(), seed in any::<u64>()) {
            let printed = spec.to_string();
            prop_assert_eq!(parse_ring_spec(&printed).unwrap(), spec.clone());
            prop_assert_eq!(parse_ring_spec(&noisy(&printed, seed)).unwrap(), spec);
        }
    }
}
