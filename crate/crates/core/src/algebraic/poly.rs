use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense integer polynomial; `coeffs[i]` is the coefficient of `x^i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    /// Trailing zero coefficients are dropped; an all-zero input is rejected.
    pub fn new(mut coeffs: Vec<BigInt>) -> Result<Self> {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(Self { coeffs })
    }

    pub fn from_i64s(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("nonempty")
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    /// Largest absolute value of a coefficient.
    pub fn height(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().expect("nonempty")
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Coefficients of the formal derivative (empty for constants).
    pub fn derivative(&self) -> Vec<BigInt> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect()
    }

    /// gcd(p, p') is constant. Computed with the Euclidean algorithm over Q.
    pub fn is_squarefree(&self) -> bool {
        let to_q = |v: &[BigInt]| -> Vec<BigRational> {
            v.iter().map(|c| BigRational::from_integer(c.clone())).collect()
        };
        let mut a = to_q(&self.coeffs);
        let mut b = to_q(&self.derivative());
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b);
            a = b;
            b = r;
        }
        a.len() <= 1
    }
}

fn trim(v: &mut Vec<BigRational>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

fn rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let lead = b.last().expect("nonzero divisor");
    while r.len() >= b.len() {
        let q = r.last().unwrap() / lead;
        let shift = r.len() - b.len();
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &q * c;
        }
        r.pop();
        trim(&mut r);
    }
    r
}

/// Parses either a bracketed coefficient list, low degree first
/// (`"[-1,-1,1]"`), or a symbolic polynomial in `x` (`"x^2 - x - 1"`).
/// Whitespace is ignored; the Unicode minus sign is accepted.
pub fn parse_polynomial(text: &str) -> Result<IntPolynomial> {
    let chars: Vec<(usize, char)> = text
        .chars()
        .enumerate()
        .filter(|(_, c)| !c.is_whitespace())
        .map(|(i, c)| (i + 1, if c == '\u{2212}' { '-' } else { c }))
        .collect();
    if chars.is_empty() {
        return Err(Error::Syntax { column: 1, message: "empty input".into() });
    }
    if chars[0].1 == '[' {
        parse_list(&chars)
    } else {
        parse_symbolic(&chars)
    }
}

fn syntax(column: usize, message: impl Into<String>) -> Error {
    Error::Syntax { column, message: message.into() }
}

struct Cursor<'a> {
    chars: &'a [(usize, char)],
    pos: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn column(&self) -> usize {
        self.chars
            .get(self.pos)
            .map_or_else(|| self.chars.last().map_or(1, |&(i, _)| i + 1), |&(i, _)| i)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().map(|&(_, c)| c).collect())
    }

    fn signed_integer(&mut self) -> Result<BigInt> {
        let negative = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let col = self.column();
        let digits = self.digits().ok_or_else(|| syntax(col, "expected an integer"))?;
        let v: BigInt = digits.parse().expect("ascii digits");
        Ok(if negative { -v } else { v })
    }
}

fn parse_list(chars: &[(usize, char)]) -> Result<IntPolynomial> {
    let mut cur = Cursor { chars, pos: 1 };
    let mut coeffs = Vec::new();
    if !cur.eat(']') {
        loop {
            coeffs.push(cur.signed_integer()?);
            if cur.eat(']') {
                break;
            }
            if !cur.eat(',') {
                return Err(syntax(cur.column(), "expected ',' or ']'"));
            }
        }
    }
    if cur.peek().is_some() {
        return Err(syntax(cur.column(), "trailing characters after ']'"));
    }
    if coeffs.is_empty() {
        return Err(syntax(cur.column(), "empty coefficient list"));
    }
    IntPolynomial::new(coeffs)
}

fn parse_symbolic(chars: &[(usize, char)]) -> Result<IntPolynomial> {
    let mut cur = Cursor { chars, pos: 0 };
    let mut coeffs: Vec<BigInt> = Vec::new();
    let mut first = true;
    while cur.peek().is_some() {
        let negative = if cur.eat('-') {
            true
        } else if cur.eat('+') || first {
            false
        } else {
            return Err(syntax(cur.column(), "expected '+' or '-'"));
        };
        first = false;
        let col = cur.column();
        let coeff = cur.digits().map(|d| d.parse::<BigInt>().expect("ascii digits"));
        if coeff.is_some() && cur.eat('*') && cur.peek() != Some('x') {
            return Err(syntax(cur.column(), "expected 'x' after '*'"));
        }
        let has_var = cur.eat('x');
        if coeff.is_none() && !has_var {
            return Err(syntax(col, "expected a term"));
        }
        let exponent = if has_var {
            if cur.eat('^') || (cur.eat('*') && cur.eat('*')) {
                let ecol = cur.column();
                let e = cur.digits().ok_or_else(|| syntax(ecol, "expected an exponent"))?;
                e.parse::<usize>().map_err(|_| syntax(ecol, "exponent too large"))?
            } else {
                1
            }
        } else {
            0
        };
        if exponent > 1 << 16 {
            return Err(syntax(col, "exponent too large"));
        }
        let mut c = coeff.unwrap_or_else(BigInt::one);
        if negative {
            c = -c;
        }
        if coeffs.len() <= exponent {
            coeffs.resize(exponent + 1, BigInt::zero());
        }
        coeffs[exponent] += c;
    }
    IntPolynomial::new(coeffs)
}

impl FromStr for IntPolynomial {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_polynomial(s)
    }
}

impl fmt::Display for IntPolynomial {
    /// Symbolic form, e.g. `x^2 - x - 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if wrote {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            wrote = true;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}
