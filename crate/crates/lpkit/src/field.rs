//! Exact field arithmetic: rationals, prime fields, and the rational-function
//! field in one variable over the rationals.
//!
//! Every element carries enough information to recover its field, and every
//! representation is canonical, so equality is plain structural equality.
//! There is no floating point anywhere.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Identifies which exact field an element lives in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldDescriptor {
    Rational,
    Prime { p: u64 },
    RationalFunction { variable: String },
}

impl FieldDescriptor {
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if is_prime_u64(p) {
            Ok(FieldDescriptor::Prime { p })
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    pub fn rational_function(variable: &str) -> Self {
        FieldDescriptor::RationalFunction {
            variable: variable.to_string(),
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rational => write!(f, "Q"),
            FieldDescriptor::Prime { p } => write!(f, "F_{p}"),
            FieldDescriptor::RationalFunction { variable } => write!(f, "Q({variable})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different fields")]
    DescriptorMismatch,
    #[error("literal denominator is zero")]
    ZeroDenominator,
    #[error("denominator vanishes at the evaluation point")]
    PoleAtPoint,
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("element is not a rational function")]
    NotRationalFunction,
}

/// An element of one of the supported exact fields, stored canonically:
/// reduced fraction, residue in `[0, p)`, or a reduced ratio of polynomials
/// with monic denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldElement {
    Rational(BigRational),
    Prime { p: u64, value: u64 },
    RatFunc {
        variable: String,
        num: Vec<BigRational>,
        den: Vec<BigRational>,
    },
}

impl FieldElement {
    pub fn descriptor(&self) -> FieldDescriptor {
        match self {
            FieldElement::Rational(_) => FieldDescriptor::Rational,
            FieldElement::Prime { p, .. } => FieldDescriptor::Prime { p: *p },
            FieldElement::RatFunc { variable, .. } => FieldDescriptor::RationalFunction {
                variable: variable.clone(),
            },
        }
    }

    pub fn zero(desc: &FieldDescriptor) -> FieldElement {
        match desc {
            FieldDescriptor::Rational => FieldElement::Rational(BigRational::zero()),
            FieldDescriptor::Prime { p } => FieldElement::Prime { p: *p, value: 0 },
            FieldDescriptor::RationalFunction { variable } => FieldElement::RatFunc {
                variable: variable.clone(),
                num: vec![],
                den: vec![BigRational::one()],
            },
        }
    }

    pub fn one(desc: &FieldDescriptor) -> FieldElement {
        FieldElement::from_i64(desc, 1)
    }

    pub fn from_i64(desc: &FieldDescriptor, n: i64) -> FieldElement {
        match desc {
            FieldDescriptor::Rational => FieldElement::Rational(BigRational::from(BigInt::from(n))),
            FieldDescriptor::Prime { p } => {
                let v = n.rem_euclid(*p as i64) as u64;
                FieldElement::Prime { p: *p, value: v }
            }
            FieldDescriptor::RationalFunction { variable } => {
                let num = if n == 0 {
                    vec![]
                } else {
                    vec![BigRational::from(BigInt::from(n))]
                };
                FieldElement::RatFunc {
                    variable: variable.clone(),
                    num,
                    den: vec![BigRational::one()],
                }
            }
        }
    }

    /// The generator of a rational-function field, i.e. the variable itself.
    pub fn variable(desc: &FieldDescriptor) -> Result<FieldElement, FieldError> {
        match desc {
            FieldDescriptor::RationalFunction { variable } => Ok(FieldElement::RatFunc {
                variable: variable.clone(),
                num: vec![BigRational::zero(), BigRational::one()],
                den: vec![BigRational::one()],
            }),
            _ => Err(FieldError::NotRationalFunction),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_zero(),
            FieldElement::Prime { value, .. } => *value == 0,
            FieldElement::RatFunc { num, .. } => num.is_empty(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_one(),
            FieldElement::Prime { value, .. } => *value == 1,
            FieldElement::RatFunc { num, den, .. } => {
                num.len() == 1 && num[0].is_one() && den.len() == 1 && den[0].is_one()
            }
        }
    }

    fn same_field(&self, other: &FieldElement) -> bool {
        match (self, other) {
            (FieldElement::Rational(_), FieldElement::Rational(_)) => true,
            (FieldElement::Prime { p: a, .. }, FieldElement::Prime { p: b, .. }) => a == b,
            (
                FieldElement::RatFunc { variable: a, .. },
                FieldElement::RatFunc { variable: b, .. },
            ) => a == b,
            _ => false,
        }
    }

    pub fn try_add(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        if !self.same_field(other) {
            return Err(FieldError::DescriptorMismatch);
        }
        Ok(match (self, other) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => {
                FieldElement::Rational(a + b)
            }
            (FieldElement::Prime { p, value: a }, FieldElement::Prime { value: b, .. }) => {
                FieldElement::Prime {
                    p: *p,
                    value: add_mod(*a, *b, *p),
                }
            }
            (
                FieldElement::RatFunc {
                    variable,
                    num: n1,
                    den: d1,
                },
                FieldElement::RatFunc {
                    num: n2, den: d2, ..
                },
            ) => {
                let num = qp_add(&qp_mul(n1, d2), &qp_mul(n2, d1));
                let den = qp_mul(d1, d2);
                ratfunc_normalized(variable.clone(), num, den)
            }
            _ => unreachable!(),
        })
    }

    pub fn try_sub(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        if !self.same_field(other) {
            return Err(FieldError::DescriptorMismatch);
        }
        Ok(match (self, other) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => {
                FieldElement::Rational(a * b)
            }
            (FieldElement::Prime { p, value: a }, FieldElement::Prime { value: b, .. }) => {
                FieldElement::Prime {
                    p: *p,
                    value: mul_mod(*a, *b, *p),
                }
            }
            (
                FieldElement::RatFunc {
                    variable,
                    num: n1,
                    den: d1,
                },
                FieldElement::RatFunc {
                    num: n2, den: d2, ..
                },
            ) => ratfunc_normalized(variable.clone(), qp_mul(n1, n2), qp_mul(d1, d2)),
            _ => unreachable!(),
        })
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement, FieldError> {
        self.try_mul(&other.inv()?)
    }

    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match self {
            FieldElement::Rational(r) => FieldElement::Rational(r.recip()),
            FieldElement::Prime { p, value } => FieldElement::Prime {
                p: *p,
                value: inv_mod(*value, *p),
            },
            FieldElement::RatFunc { variable, num, den } => {
                ratfunc_normalized(variable.clone(), den.clone(), num.clone())
            }
        })
    }

    pub fn neg(&self) -> FieldElement {
        match self {
            FieldElement::Rational(r) => FieldElement::Rational(-r),
            FieldElement::Prime { p, value } => FieldElement::Prime {
                p: *p,
                value: if *value == 0 { 0 } else { p - value },
            },
            FieldElement::RatFunc { variable, num, den } => FieldElement::RatFunc {
                variable: variable.clone(),
                num: num.iter().map(|c| -c).collect(),
                den: den.clone(),
            },
        }
    }

    /// Integer power with negative exponents allowed (via inversion).
    pub fn pow(&self, exp: i64) -> Result<FieldElement, FieldError> {
        if exp < 0 {
            return self.inv()?.pow(-exp);
        }
        let mut acc = FieldElement::one(&self.descriptor());
        let mut base = self.clone();
        let mut e = exp as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base)?;
            }
            base = base.try_mul(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Substitute a base-field value for the variable of a rational-function
    /// element.
    pub fn evaluate_at(&self, point: &FieldElement) -> Result<FieldElement, FieldError> {
        let (num, den) = match self {
            FieldElement::RatFunc { num, den, .. } => (num, den),
            _ => return Err(FieldError::NotRationalFunction),
        };
        let pt = match point {
            FieldElement::Rational(r) => r,
            _ => return Err(FieldError::DescriptorMismatch),
        };
        let d = qp_eval(den, pt);
        if d.is_zero() {
            return Err(FieldError::PoleAtPoint);
        }
        Ok(FieldElement::Rational(qp_eval(num, pt) / d))
    }
}

impl std::ops::Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.try_add(rhs).expect("field mismatch in addition")
    }
}

impl std::ops::Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.try_sub(rhs).expect("field mismatch in subtraction")
    }
}

impl std::ops::Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.try_mul(rhs).expect("field mismatch in multiplication")
    }
}

impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(self)
    }
}

// ---------------------------------------------------------------------------
// Dense polynomials over Q, used internally by the rational-function field.
// Coefficients are stored lowest degree first; the zero polynomial is empty.
// ---------------------------------------------------------------------------

fn qp_trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn qp_add(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let zero = BigRational::zero();
    let v = (0..n)
        .map(|i| a.get(i).unwrap_or(&zero) + b.get(i).unwrap_or(&zero))
        .collect();
    qp_trim(v)
}

fn qp_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut v = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    qp_trim(v)
}

fn qp_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = &b[db];
    while r.len() > db {
        let dr = r.len() - 1;
        let q = &r[dr] / lead;
        for (i, c) in b.iter().enumerate() {
            let idx = dr - db + i;
            let t = &q * c;
            r[idx] -= t;
        }
        r = qp_trim(r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn qp_monic(v: Vec<BigRational>) -> Vec<BigRational> {
    match v.last().cloned() {
        None => v,
        Some(lead) => v.into_iter().map(|c| c / &lead).collect(),
    }
}

fn qp_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    while !b.is_empty() {
        let r = qp_rem(&a, &b);
        a = b;
        b = r;
    }
    qp_monic(a)
}

fn qp_div_exact(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() {
        return vec![];
    }
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = &b[db];
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() > db {
        let dr = r.len() - 1;
        let c = &r[dr] / lead;
        q[dr - db] = c.clone();
        for (i, bc) in b.iter().enumerate() {
            let t = &c * bc;
            r[dr - db + i] -= t;
        }
        r = qp_trim(r);
        if r.is_empty() {
            break;
        }
    }
    qp_trim(q)
}

fn qp_eval(v: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in v.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn ratfunc_normalized(
    variable: String,
    num: Vec<BigRational>,
    den: Vec<BigRational>,
) -> FieldElement {
    let num = qp_trim(num);
    let den = qp_trim(den);
    assert!(!den.is_empty(), "rational function with zero denominator");
    if num.is_empty() {
        return FieldElement::RatFunc {
            variable,
            num: vec![],
            den: vec![BigRational::one()],
        };
    }
    let g = qp_gcd(&num, &den);
    let (num, den) = if g.len() > 1 {
        (qp_div_exact(&num, &g), qp_div_exact(&den, &g))
    } else {
        (num, den)
    };
    let lead = den.last().cloned().expect("nonzero denominator");
    let num = num.into_iter().map(|c| c / &lead).collect();
    let den = den.into_iter().map(|c| c / &lead).collect();
    FieldElement::RatFunc { variable, num, den }
}

// ---------------------------------------------------------------------------
// Prime-field helpers
// ---------------------------------------------------------------------------

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat; p is prime and a != 0 mod p.
    pow_mod(a, p - 2, p)
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    // Deterministic Miller-Rabin for u64 with the standard witness set.
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// ---------------------------------------------------------------------------
// Element grammar: integers, fractions, and polynomial expressions in the
// declared variable with +, -, *, /, ^ and parentheses.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<Token>, FieldError> {
    let mut tokens = vec![];
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' | '\n' => {
                chars.next();
            }
            '0'..='9' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                tokens.push(Token::Int(s.parse().expect("digits parse as BigInt")));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                tokens.push(Token::Ident(s));
            }
            '+' => {
                chars.next();
                tokens.push(Token::Plus);
            }
            '-' => {
                chars.next();
                tokens.push(Token::Minus);
            }
            '*' => {
                chars.next();
                tokens.push(Token::Star);
            }
            '/' => {
                chars.next();
                tokens.push(Token::Slash);
            }
            '^' => {
                chars.next();
                tokens.push(Token::Caret);
            }
            '(' => {
                chars.next();
                tokens.push(Token::LParen);
            }
            ')' => {
                chars.next();
                tokens.push(Token::RParen);
            }
            other => {
                return Err(FieldError::Syntax(format!("unexpected character '{other}'")));
            }
        }
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    desc: &'a FieldDescriptor,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<&Token> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<FieldElement, FieldError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    acc = acc.try_add(&self.term()?)?;
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    acc = acc.try_sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<FieldElement, FieldError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    acc = acc.try_mul(&self.factor()?)?;
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = acc.div(&rhs).map_err(|e| match e {
                        FieldError::DivisionByZero => FieldError::ZeroDenominator,
                        other => other,
                    })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<FieldElement, FieldError> {
        if let Some(Token::Minus) = self.peek() {
            self.pos += 1;
            return Ok(self.factor()?.neg());
        }
        let base = self.atom()?;
        if let Some(Token::Caret) = self.peek() {
            self.pos += 1;
            let negative = matches!(self.peek(), Some(Token::Minus));
            if negative {
                self.pos += 1;
            }
            let exp = match self.next() {
                Some(Token::Int(n)) => i64::try_from(n.clone())
                    .map_err(|_| FieldError::Syntax("exponent out of range".into()))?,
                _ => return Err(FieldError::Syntax("expected integer exponent".into())),
            };
            let exp = if negative { -exp } else { exp };
            return base.pow(exp).map_err(|e| match e {
                FieldError::DivisionByZero => FieldError::ZeroDenominator,
                other => other,
            });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<FieldElement, FieldError> {
        match self.next().cloned() {
            Some(Token::Int(n)) => Ok(element_from_bigint(self.desc, &n)),
            Some(Token::Ident(name)) => match self.desc {
                FieldDescriptor::RationalFunction { variable } if *variable == name => {
                    FieldElement::variable(self.desc)
                }
                _ => Err(FieldError::Syntax(format!("unknown symbol '{name}'"))),
            },
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(FieldError::Syntax("expected ')'".into())),
                }
            }
            other => Err(FieldError::Syntax(format!("unexpected token {other:?}"))),
        }
    }
}

fn element_from_bigint(desc: &FieldDescriptor, n: &BigInt) -> FieldElement {
    match desc {
        FieldDescriptor::Rational => FieldElement::Rational(BigRational::from(n.clone())),
        FieldDescriptor::Prime { p } => {
            let m = n.mod_floor_u64(*p);
            FieldElement::Prime { p: *p, value: m }
        }
        FieldDescriptor::RationalFunction { variable } => {
            if n.is_zero() {
                FieldElement::zero(desc)
            } else {
                FieldElement::RatFunc {
                    variable: variable.clone(),
                    num: vec![BigRational::from(n.clone())],
                    den: vec![BigRational::one()],
                }
            }
        }
    }
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        use num::Integer;
        let m = self.mod_floor(&BigInt::from(p));
        u64::try_from(m).expect("residue fits in u64")
    }
}

/// Parse an element of the declared field from the expression grammar.
pub fn parse_element(text: &str, desc: &FieldDescriptor) -> Result<FieldElement, FieldError> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(FieldError::Syntax("empty input".into()));
    }
    let mut parser = Parser {
        tokens: &tokens,
        pos: 0,
        desc,
    };
    let value = parser.expr()?;
    if parser.pos != tokens.len() {
        return Err(FieldError::Syntax("trailing input".into()));
    }
    Ok(value)
}

fn format_qpoly(num: &[BigRational], variable: &str, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if num.is_empty() {
        return write!(f, "0");
    }
    let mut first = true;
    for (k, c) in num.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if first {
            if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
        } else if c.is_negative() {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        if k == 0 {
            write!(f, "{mag}")?;
        } else {
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            if k == 1 {
                write!(f, "{variable}")?;
            } else {
                write!(f, "{variable}^{k}")?;
            }
        }
    }
    Ok(())
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rational(r) => write!(f, "{r}"),
            FieldElement::Prime { value, .. } => write!(f, "{value}"),
            FieldElement::RatFunc { variable, num, den } => {
                let den_is_one = den.len() == 1 && den[0].is_one();
                if den_is_one {
                    format_qpoly(num, variable, f)
                } else {
                    write!(f, "(")?;
                    format_qpoly(num, variable, f)?;
                    write!(f, ")/(")?;
                    format_qpoly(den, variable, f)?;
                    write!(f, ")")
                }
            }
        }
    }
}
