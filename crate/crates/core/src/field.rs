//! The supported base fields, their elements, and a unified element parser.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! expr    := term { ('+' | '-') term }
//! term    := unary { ('*' | '/') unary | primary }     (juxtaposition multiplies)
//! unary   := '-' unary | power
//! power   := primary [ '^' ['-'] integer ]
//! primary := integer | gen | 'sqrt(' ['-'] integer ')' | '(' expr ')'
//! gen     := 't' (over F_p(t)) | 'z' (over Q(z)) | 'i' (over Q(sqrt(-1)))
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::fp_poly::{FpPoly, FpRatio};
use crate::arith::quad::{is_valid_discriminant_root, QuadElem};
use crate::arith::rational::{fmt_rational, Rational};
use crate::arith::zpoly::{primitive_of_rational, ZPoly};
use crate::error::{GvfError, Result};

/// Which field a value lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldKind {
    Q,
    /// `F_p(t)`.
    Fp(u64),
    /// `Q(sqrt d)`.
    Quad(i64),
    /// `Q(z)`.
    Qz,
}

impl FieldKind {
    pub fn fp(p: u64) -> Result<Self> {
        if !crate::arith::factor::is_prime(&p.into()) {
            return Err(GvfError::domain(format!("{p} is not prime")));
        }
        Ok(FieldKind::Fp(p))
    }

    pub fn quad(d: i64) -> Result<Self> {
        if !is_valid_discriminant_root(d) {
            return Err(GvfError::domain(format!(
                "d = {d} must be squarefree and different from 0 and 1"
            )));
        }
        Ok(FieldKind::Quad(d))
    }

    /// `true` for the number fields (characteristic zero with an
    /// archimedean place).
    pub fn is_char_zero(&self) -> bool {
        !matches!(self, FieldKind::Fp(_))
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Q => write!(f, "Q"),
            FieldKind::Fp(p) => write!(f, "F_{p}(t)"),
            FieldKind::Quad(d) => write!(f, "Q(sqrt({d}))"),
            FieldKind::Qz => write!(f, "Q(z)"),
        }
    }
}

/// A nonzero-denominator element of `Q(z)`: `scalar * num / den` with `num`,
/// `den` coprime primitive integer polynomials with positive leading
/// coefficients. Zero is `scalar = 0`, `num = den = 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QzElem {
    scalar: Rational,
    num: ZPoly,
    den: ZPoly,
}

impl QzElem {
    pub fn zero() -> Self {
        QzElem {
            scalar: Rational::zero(),
            num: ZPoly::one(),
            den: ZPoly::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        QzElem {
            scalar: c,
            num: ZPoly::one(),
            den: ZPoly::one(),
        }
    }

    pub fn z() -> Self {
        QzElem {
            scalar: Rational::one(),
            num: ZPoly::z(),
            den: ZPoly::one(),
        }
    }

    /// `scalar * num / den` for arbitrary integer polynomials.
    pub fn from_parts(scalar: Rational, num: &ZPoly, den: &ZPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(GvfError::domain("zero denominator"));
        }
        if scalar.is_zero() || num.is_zero() {
            return Ok(Self::zero());
        }
        let nc = signed_content(num);
        let dc = signed_content(den);
        let n = num.primitive();
        let d = den.primitive();
        let g = n.gcd(&d);
        Ok(QzElem {
            scalar: scalar * nc / dc,
            num: n.div_exact(&g).expect("gcd divides"),
            den: d.div_exact(&g).expect("gcd divides"),
        })
    }

    /// Polynomial with rational coefficients, low degree first.
    pub fn from_rational_coeffs(coeffs: &[Rational]) -> Self {
        let (c, g) = primitive_of_rational(coeffs);
        Self::from_parts(c, &g, &ZPoly::one()).expect("unit denominator")
    }

    pub fn scalar(&self) -> &Rational {
        &self.scalar
    }

    pub fn num(&self) -> &ZPoly {
        &self.num
    }

    pub fn den(&self) -> &ZPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero()
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::from_parts(
            &self.scalar * &o.scalar,
            &self.num.mul(&o.num),
            &self.den.mul(&o.den),
        )
        .expect("nonzero denominators")
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(GvfError::domain("inverse of zero"));
        }
        Self::from_parts(self.scalar.recip(), &self.den, &self.num)
    }

    pub fn neg(&self) -> Self {
        QzElem {
            scalar: -&self.scalar,
            ..self.clone()
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let l = self.scalar.denom() * o.scalar.denom();
        let lq = Rational::from_integer(l.clone());
        let c1 = (&self.scalar * &lq).to_integer();
        let c2 = (&o.scalar * &lq).to_integer();
        let p = self
            .num
            .mul(&o.den)
            .scale(&c1)
            .add(&o.num.mul(&self.den).scale(&c2));
        Self::from_parts(
            Rational::new(BigInt::one(), l),
            &p,
            &self.den.mul(&o.den),
        )
        .expect("nonzero denominators")
    }

    /// Value at a rational point, `None` at a pole.
    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(&self.scalar * self.num.eval(x) / d)
    }

    /// Numerator as a rational-coefficient polynomial (`scalar * num`).
    fn scaled_num_coeffs(&self) -> Vec<Rational> {
        self.num
            .coeffs()
            .iter()
            .map(|c| &self.scalar * Rational::from_integer(c.clone()))
            .collect()
    }
}

fn signed_content(p: &ZPoly) -> Rational {
    let c = p.content();
    Rational::from_integer(if p.lead().is_negative() { -c } else { c })
}

fn fmt_rational_poly(coeffs: &[Rational], var: &str) -> String {
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        if i == 0 {
            out.push_str(&fmt_rational(&mag));
        } else if mag.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{}*{mono}", fmt_rational(&mag)));
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

impl fmt::Debug for QzElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QzElem({self})")
    }
}

impl fmt::Display for QzElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = fmt_rational_poly(&self.scaled_num_coeffs(), "z");
        if self.den.is_one() {
            write!(f, "{n}")
        } else {
            write!(f, "({n})/({})", self.den.fmt_in("z"))
        }
    }
}

/// An element of one of the supported fields.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldElem {
    Q(Rational),
    Fp(FpRatio),
    Quad(QuadElem),
    Qz(QzElem),
}

fn mismatch(a: &FieldElem, b: &FieldElem) -> GvfError {
    GvfError::mismatch(a.kind(), b.kind())
}

impl FieldElem {
    pub fn kind(&self) -> FieldKind {
        match self {
            FieldElem::Q(_) => FieldKind::Q,
            FieldElem::Fp(x) => FieldKind::Fp(x.characteristic()),
            FieldElem::Quad(x) => FieldKind::Quad(x.d()),
            FieldElem::Qz(_) => FieldKind::Qz,
        }
    }

    /// The image of a rational in `kind` (reduced mod `p` for `F_p(t)`).
    pub fn from_rational(kind: FieldKind, q: &Rational) -> Result<Self> {
        Ok(match kind {
            FieldKind::Q => FieldElem::Q(q.clone()),
            FieldKind::Fp(p) => {
                let pb = BigInt::from(p);
                let red = |n: &BigInt| {
                    let r = ((n % &pb) + &pb) % &pb;
                    r.to_u64().expect("residue")
                };
                let den = red(q.denom());
                if den == 0 {
                    return Err(GvfError::domain(format!(
                        "denominator of {} vanishes mod {p}",
                        fmt_rational(q)
                    )));
                }
                FieldElem::Fp(
                    FpRatio::new(FpPoly::constant(p, red(q.numer())), FpPoly::constant(p, den))
                        .expect("nonzero"),
                )
            }
            FieldKind::Quad(d) => FieldElem::Quad(QuadElem::from_rational(d, q.clone())),
            FieldKind::Qz => FieldElem::Qz(QzElem::constant(q.clone())),
        })
    }

    pub fn from_int(kind: FieldKind, n: i64) -> Self {
        Self::from_rational(kind, &Rational::from_integer(BigInt::from(n)))
            .expect("integers embed")
    }

    pub fn zero(kind: FieldKind) -> Self {
        Self::from_int(kind, 0)
    }

    pub fn one(kind: FieldKind) -> Self {
        Self::from_int(kind, 1)
    }

    /// The transcendental generator (`t` or `z`), or `sqrt d` for quadratic fields.
    pub fn generator(kind: FieldKind) -> Result<Self> {
        match kind {
            FieldKind::Q => Err(GvfError::domain("Q has no generator")),
            FieldKind::Fp(p) => Ok(FieldElem::Fp(FpRatio::t(p))),
            FieldKind::Quad(d) => Ok(FieldElem::Quad(QuadElem::sqrt_d(d))),
            FieldKind::Qz => Ok(FieldElem::Qz(QzElem::z())),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Q(x) => x.is_zero(),
            FieldElem::Fp(x) => x.is_zero(),
            FieldElem::Quad(x) => x.is_zero(),
            FieldElem::Qz(x) => x.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one(self.kind())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        Ok(match (self, o) {
            (FieldElem::Q(a), FieldElem::Q(b)) => FieldElem::Q(a + b),
            (FieldElem::Fp(a), FieldElem::Fp(b)) if a.characteristic() == b.characteristic() => {
                FieldElem::Fp(a.add(b))
            }
            (FieldElem::Quad(a), FieldElem::Quad(b)) if a.d() == b.d() => FieldElem::Quad(a.add(b)),
            (FieldElem::Qz(a), FieldElem::Qz(b)) => FieldElem::Qz(a.add(b)),
            _ => return Err(mismatch(self, o)),
        })
    }

    pub fn neg(&self) -> Self {
        match self {
            FieldElem::Q(a) => FieldElem::Q(-a),
            FieldElem::Fp(a) => FieldElem::Fp(a.neg()),
            FieldElem::Quad(a) => FieldElem::Quad(a.neg()),
            FieldElem::Qz(a) => FieldElem::Qz(a.neg()),
        }
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        Ok(match (self, o) {
            (FieldElem::Q(a), FieldElem::Q(b)) => FieldElem::Q(a * b),
            (FieldElem::Fp(a), FieldElem::Fp(b)) if a.characteristic() == b.characteristic() => {
                FieldElem::Fp(a.mul(b))
            }
            (FieldElem::Quad(a), FieldElem::Quad(b)) if a.d() == b.d() => FieldElem::Quad(a.mul(b)),
            (FieldElem::Qz(a), FieldElem::Qz(b)) => FieldElem::Qz(a.mul(b)),
            _ => return Err(mismatch(self, o)),
        })
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(GvfError::domain("inverse of zero"));
        }
        Ok(match self {
            FieldElem::Q(a) => FieldElem::Q(a.recip()),
            FieldElem::Fp(a) => FieldElem::Fp(a.inv()?),
            FieldElem::Quad(a) => FieldElem::Quad(a.inv()?),
            FieldElem::Qz(a) => FieldElem::Qz(a.inv()?),
        })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.mul(&o.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(self.kind());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Galois conjugation on quadratic fields; identity elsewhere.
    pub fn conj(&self) -> Self {
        match self {
            FieldElem::Quad(a) => FieldElem::Quad(a.conj()),
            _ => self.clone(),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            FieldElem::Q(a) => Some(a),
            FieldElem::Quad(a) if a.is_rational() => Some(a.a()),
            _ => None,
        }
    }

    /// Parses an element of `kind` (see the module docs for the grammar).
    pub fn parse(kind: FieldKind, text: &str) -> Result<Self> {
        let mut p = Parser {
            kind,
            src: text.as_bytes(),
            pos: 0,
        };
        let v = p.expr()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(GvfError::parse(
                p.pos,
                format!("unexpected character {:?}", p.src[p.pos] as char),
            ));
        }
        Ok(v)
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self, self.kind())
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Q(a) => write!(f, "{}", fmt_rational(a)),
            FieldElem::Fp(a) => write!(f, "{a}"),
            FieldElem::Quad(a) => write!(f, "{a}"),
            FieldElem::Qz(a) => write!(f, "{a}"),
        }
    }
}

struct Parser<'a> {
    kind: FieldKind,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(GvfError::parse(self.pos, format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<FieldElem> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                let t = self.term()?;
                acc = acc.add(&t)?;
            } else if self.eat(b'-') {
                let t = self.term()?;
                acc = acc.sub(&t)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_primary(&mut self) -> bool {
        matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'(')
    }

    fn term(&mut self) -> Result<FieldElem> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                let u = self.unary()?;
                acc = acc.mul(&u)?;
            } else if self.peek() == Some(b'/') {
                let at = self.pos;
                self.pos += 1;
                let u = self.unary()?;
                acc = acc
                    .div(&u)
                    .map_err(|_| GvfError::parse(at, "division by zero"))?;
            } else if self.starts_primary() {
                let u = self.power()?;
                acc = acc.mul(&u)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<FieldElem> {
        if self.eat(b'-') {
            Ok(self.unary()?.neg())
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<FieldElem> {
        let base = self.primary()?;
        if self.eat(b'^') {
            let neg = self.eat(b'-');
            let at = self.pos;
            let n = self.integer()?;
            let e = n
                .to_i64()
                .filter(|e| *e <= 10_000)
                .ok_or_else(|| GvfError::parse(at, "exponent too large"))?;
            let e = if neg { -e } else { e };
            return base
                .pow(e)
                .map_err(|_| GvfError::parse(at, "negative power of zero"));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(GvfError::parse(start, "expected an integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        Ok(s.parse().expect("digits"))
    }

    fn primary(&mut self) -> Result<FieldElem> {
        let Some(c) = self.peek() else {
            return Err(GvfError::parse(self.pos, "unexpected end of input"));
        };
        let at = self.pos;
        if c == b'(' {
            self.pos += 1;
            let v = self.expr()?;
            self.expect(b')')?;
            return Ok(v);
        }
        if c.is_ascii_digit() {
            let n = self.integer()?;
            return FieldElem::from_rational(self.kind, &Rational::from_integer(n))
                .map_err(|e| GvfError::parse(at, e.to_string()));
        }
        if c.is_ascii_alphabetic() {
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
                self.pos += 1;
            }
            let word = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
            return match (word, self.kind) {
                ("t", FieldKind::Fp(_)) | ("z", FieldKind::Qz) => {
                    FieldElem::generator(self.kind)
                }
                ("i", FieldKind::Quad(-1)) => FieldElem::generator(self.kind),
                ("sqrt", FieldKind::Quad(d)) => {
                    self.expect(b'(')?;
                    let neg = self.eat(b'-');
                    let at = self.pos;
                    let n = self.integer()?;
                    let n = if neg { -n } else { n };
                    self.expect(b')')?;
                    if n != BigInt::from(d) {
                        return Err(GvfError::parse(
                            at,
                            format!("sqrt({n}) does not belong to Q(sqrt({d}))"),
                        ));
                    }
                    FieldElem::generator(self.kind)
                }
                _ => Err(GvfError::parse(
                    start,
                    format!("unknown symbol {word:?} for {}", self.kind),
                )),
            };
        }
        Err(GvfError::parse(at, format!("unexpected character {:?}", c as char)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    #[test]
    fn parse_each_field() {
        assert_eq!(
            FieldElem::parse(FieldKind::Q, "-6/4").unwrap(),
            FieldElem::Q(rat(-3, 2))
        );
        let f = FieldElem::parse(FieldKind::Fp(3), "(t^2+1)/t").unwrap();
        assert_eq!(f.to_string(), "(t^2 + 1)/(t)");
        let q = FieldElem::parse(FieldKind::Quad(2), "1/2+3/4*sqrt(2)").unwrap();
        assert_eq!(
            q,
            FieldElem::Quad(QuadElem::new(2, rat(1, 2), rat(3, 4)).unwrap())
        );
        let i = FieldElem::parse(FieldKind::Quad(-1), "2 - i").unwrap();
        assert_eq!(i.to_string(), "2-sqrt(-1)");
        let z = FieldElem::parse(FieldKind::Qz, "3z^2 + z").unwrap();
        assert_eq!(z.to_string(), "3*z^2 + z");
    }

    #[test]
    fn parse_errors_carry_offsets() {
        match FieldElem::parse(FieldKind::Q, "1 + ") {
            Err(GvfError::Parse { offset, .. }) => assert_eq!(offset, 5),
            other => panic!("{other:?}"),
        }
        assert!(FieldElem::parse(FieldKind::Q, "t").is_err());
        assert!(FieldElem::parse(FieldKind::Quad(2), "sqrt(3)").is_err());
        assert!(FieldElem::parse(FieldKind::Q, "1/0").is_err());
    }

    #[test]
    fn qz_normalizes() {
        let a = FieldElem::parse(FieldKind::Qz, "(2z^2 - 2)/(4z + 4)").unwrap();
        let b = FieldElem::parse(FieldKind::Qz, "z/2 - 1/2").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "1/2*z - 1/2");
        let c = FieldElem::parse(FieldKind::Qz, "1/(z+1) - 1/(z-1)").unwrap();
        assert_eq!(c.to_string(), "(-2)/(z^2 - 1)");
    }

    #[test]
    fn printed_elements_reparse() {
        for (k, s) in [
            (FieldKind::Q, "7/3"),
            (FieldKind::Fp(5), "(3t^3 + t)/(t^2 + 4)"),
            (FieldKind::Quad(-5), "1/3 - 2*sqrt(-5)"),
            (FieldKind::Qz, "(z^3 - 2/3*z)/(5z^2 + 1)"),
        ] {
            let x = FieldElem::parse(k, s).unwrap();
            let y = FieldElem::parse(k, &x.to_string()).unwrap();
            assert_eq!(x, y, "{s}");
        }
    }

    #[test]
    fn arithmetic_and_mismatch() {
        let a = FieldElem::from_int(FieldKind::Q, 2);
        let b = FieldElem::from_int(FieldKind::Fp(3), 2);
        assert!(matches!(a.add(&b), Err(GvfError::FieldMismatch { .. })));
        assert_eq!(a.pow(-3).unwrap(), FieldElem::Q(rat(1, 8)));
        assert_eq!(b.mul(&b).unwrap(), FieldElem::from_int(FieldKind::Fp(3), 1));
        assert_eq!(
            FieldElem::from_rational(FieldKind::Q, &int(5)).unwrap(),
            FieldElem::Q(int(5))
        );
    }
}
