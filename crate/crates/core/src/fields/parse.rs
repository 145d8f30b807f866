//! Text syntax for fields and elements.
//!
//! Fields: `Q`, `R` and `Qbar` (rationals used as real or closure
//! ambient), `F5`, `F9`, `GF(9)`, `F9[1,0,1]` (explicit modulus, low
//! coefficient first), `Q3`, `Qp(3,20)`, `F2(t)`, and any of these followed
//! by `(sqrt(d))` one or more times.
//!
//! Elements are arithmetic expressions over the field: integers, `+ - * /`,
//! integer powers `^`, parentheses, `sqrt(d)` for a tower generator, `t`
//! (function fields), `x` or `[c0,c1,...]` (Galois fields) and `O(p^k)`
//! (p-adic zero to precision). Optional suffixes `(mod p)`, `(mod p, poly)`
//! and `: prec N` are accepted and checked.

use num_bigint::BigInt;
use num_integer::Integer;

use super::{primes, Elem, ExtensionMode, Field, FieldKind, PAdic, Value, DEFAULT_PADIC_PRECISION};
use crate::error::{Error, Result};

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Index of the `(` matching the `)` that ends `s`.
fn matching_open(s: &str) -> Option<usize> {
    let bytes = s.as_bytes();
    let mut depth = 0i32;
    for i in (0..bytes.len()).rev() {
        match bytes[i] {
            b')' => depth += 1,
            b'(' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

/// Split on `sep` outside brackets and parentheses.
pub(crate) fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn parse_u64(s: &str) -> Result<u64> {
    s.trim().parse().map_err(|_| perr(format!("expected an integer, got {s:?}")))
}

fn parse_list(s: &str) -> Result<Vec<u64>> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .ok_or_else(|| perr(format!("expected [..], got {s:?}")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner.split(',').map(parse_u64).collect()
}

/// Parse a field and the ambient it was named as.
pub fn parse_field_ambient(spec: &str) -> Result<(Field, Option<ExtensionMode>)> {
    let s = spec.trim().replace(' ', "");
    if s.ends_with("))") {
        if let Some(i) = matching_open(&s) {
            let inner = &s[i + 1..s.len() - 1];
            if let Some(arg) = inner.strip_prefix("sqrt(").and_then(|a| a.strip_suffix(')')) {
                let (base, amb) = parse_field_ambient(&s[..i])?;
                let d = parse_elem(&base, arg)?;
                return Ok((Field::quad_ext(&base, &d)?, amb));
            }
        }
    }
    let field = match s.as_str() {
        "Q" | "QQ" => return Ok((Field::rationals(), None)),
        "R" | "RR" | "real" => return Ok((Field::rationals(), Some(ExtensionMode::Real))),
        "Qbar" | "closure" => return Ok((Field::rationals(), Some(ExtensionMode::Closure))),
        _ => parse_base_field(&s)?,
    };
    Ok((field, None))
}

pub fn parse_field(spec: &str) -> Result<Field> {
    Ok(parse_field_ambient(spec)?.0)
}

fn parse_base_field(s: &str) -> Result<Field> {
    if let Some(rest) = s.strip_prefix("Qp(").and_then(|r| r.strip_suffix(')')) {
        let parts: Vec<&str> = rest.split(',').collect();
        let p = parse_u64(parts[0])?;
        let n = match parts.get(1) {
            Some(n) => parse_u64(n)? as u32,
            None => DEFAULT_PADIC_PRECISION,
        };
        return Field::padic(p, n);
    }
    if let Some(rest) = s.strip_prefix('Q') {
        return Field::padic(parse_u64(rest)?, DEFAULT_PADIC_PRECISION);
    }
    if let Some(rest) = s.strip_suffix("(t)") {
        let p = parse_u64(rest.strip_prefix('F').ok_or_else(|| perr(s))?)?;
        return Field::rational_functions(p);
    }
    let (order, modulus) = if let Some(rest) = s.strip_prefix("GF(") {
        let close = rest.find(')').ok_or_else(|| perr(s))?;
        (parse_u64(&rest[..close])?, &rest[close + 1..])
    } else if let Some(rest) = s.strip_prefix('F') {
        let end = rest.find('[').unwrap_or(rest.len());
        (parse_u64(&rest[..end])?, &rest[end..])
    } else {
        return Err(Error::InvalidField(format!("unknown field {s:?}")));
    };
    if modulus.is_empty() {
        return Field::finite(order);
    }
    let (p, r) = primes::prime_power(order)
        .ok_or_else(|| Error::InvalidField(format!("{order} is not a prime power")))?;
    let coeffs = parse_list(modulus)?;
    let f = Field::galois_with_modulus(p, coeffs)?;
    if f.order() != Some(order) || r < 2 {
        return Err(Error::InvalidField(format!("modulus does not define F{order}")));
    }
    Ok(f)
}

// ---- element expressions ----

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = cs[st..i].iter().collect();
            out.push(Tok::Num(text.parse().unwrap()));
        } else if c.is_ascii_alphabetic() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()[],\u{2212}".contains(c) {
            out.push(Tok::Sym(if c == '\u{2212}' { '-' } else { c }));
            i += 1;
        } else {
            return Err(perr(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    field: &'a Field,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(perr(format!("expected {c:?} at token {}", self.pos)))
        }
    }

    fn expr(&mut self) -> Result<Elem> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.try_add(&self.term()?)?;
            } else if self.eat('-') {
                acc = acc.try_sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Elem> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.try_mul(&self.unary()?)?;
            } else if self.eat('/') {
                acc = acc.div(&self.unary()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Elem> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Elem> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let Some(Tok::Num(n)) = self.peek().cloned() else {
            return Err(perr("exponent must be an integer"));
        };
        self.pos += 1;
        let e: i64 = n.try_into().map_err(|_| perr("exponent too large"))?;
        base.pow(if neg { -e } else { e })
    }

    fn atom(&mut self) -> Result<Elem> {
        let tok = self.peek().cloned().ok_or_else(|| perr("unexpected end of input"))?;
        self.pos += 1;
        match tok {
            Tok::Num(n) => self.field.rational(&n.into()),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Sym('[') => {
                let mut coeffs = Vec::new();
                if !self.eat(']') {
                    loop {
                        let c = self.expr()?;
                        coeffs.push(c);
                        if self.eat(']') {
                            break;
                        }
                        self.expect(',')?;
                    }
                }
                let x = self.field.generator()?;
                let mut acc = self.field.zero();
                for c in coeffs.iter().rev() {
                    acc = &(&acc * &x) + c;
                }
                Ok(acc)
            }
            Tok::Ident(name) => match name.as_str() {
                "t" | "x" => self.field.generator(),
                "sqrt" => {
                    self.expect('(')?;
                    let arg = self.expr()?;
                    self.expect(')')?;
                    tower_sqrt(self.field, &arg)
                }
                "O" => {
                    self.expect('(')?;
                    let arg = self.expr()?;
                    self.expect(')')?;
                    let pv = arg.padic().and_then(|v| v.valuation());
                    match pv {
                        Some(k) => Ok(self.field.elem(Value::PAdic(PAdic::Zero { abs: k }))),
                        None => Err(perr("O(..) needs a p-adic power of p")),
                    }
                }
                _ => Err(perr(format!("unknown name {name:?}"))),
            },
            Tok::Sym(c) => Err(perr(format!("unexpected {c:?}"))),
        }
    }
}

/// `sqrt(d)` inside a tower: the generator of the level whose radicand is
/// `d`, or the canonical root when `d` is already a square.
fn tower_sqrt(field: &Field, d: &Elem) -> Result<Elem> {
    for level in field.tower() {
        if let FieldKind::QuadExt { d: dl, .. } = level.kind() {
            if field.embed(dl)? == *d {
                return field.embed(&level.generator()?);
            }
        }
    }
    d.sqrt()?.ok_or_else(|| perr(format!("sqrt({d}) is not in {field}")))
}

fn strip_mod_suffix<'a>(field: &Field, s: &'a str) -> Result<&'a str> {
    let t = s.trim_end();
    if !t.ends_with(')') {
        return Ok(t);
    }
    let Some(i) = matching_open(t) else { return Ok(t) };
    let inner = t[i + 1..t.len() - 1].trim();
    let Some(rest) = inner.strip_prefix("mod") else { return Ok(t) };
    let p = parse_u64(split_top(rest, ',')[0])?;
    if p != field.characteristic() {
        return Err(Error::FieldMismatch(format!("(mod {p}) in {field}")));
    }
    Ok(t[..i].trim_end())
}

pub fn parse_elem(field: &Field, text: &str) -> Result<Elem> {
    let mut s = text.trim();
    let mut prec = None;
    if field.is_padic() {
        if let Some((body, tail)) = s.rsplit_once(':') {
            let n = tail.trim().strip_prefix("prec").ok_or_else(|| perr(tail))?;
            prec = Some(parse_u64(n)? as u32);
            s = body.trim();
        }
    }
    let s = strip_mod_suffix(field, s)?;
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(perr("empty element"));
    }
    let mut p = Parser { toks, pos: 0, field };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(perr(format!("trailing input in {text:?}")));
    }
    match (prec, e.value()) {
        (Some(n), Value::PAdic(PAdic::Unit { val, unit, rel })) => {
            let n = n.min(*rel);
            let pb = BigInt::from(field.padic_prime().unwrap());
            let m = num_traits::pow(pb, n as usize);
            Ok(field.elem(Value::PAdic(PAdic::Unit { val: *val, unit: unit.mod_floor(&m), rel: n })))
        }
        _ => Ok(e),
    }
}

// ---- formatting ----

fn format_poly(c: &[u64], var: &str) -> String {
    if c.is_empty() {
        return "0".into();
    }
    let mut terms = Vec::new();
    for (i, &k) in c.iter().enumerate() {
        if k == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        terms.push(match (i, k) {
            (0, _) => k.to_string(),
            (_, 1) => mono,
            _ => format!("{k}*{mono}"),
        });
    }
    terms.join("+")
}

pub(crate) fn format_value(field: &Field, value: &Value) -> String {
    match (field.kind(), value) {
        (_, Value::Rational(r)) => r.to_string(),
        (_, Value::Residue(r)) => r.to_string(),
        (_, Value::Poly(c)) => {
            let cs: Vec<String> = if c.is_empty() {
                vec!["0".into()]
            } else {
                c.iter().map(|x| x.to_string()).collect()
            };
            format!("[{}]", cs.join(","))
        }
        (FieldKind::PAdic { p, .. }, Value::PAdic(x)) => match x {
            PAdic::Exact0 => "0".into(),
            PAdic::Zero { abs } => format!("O({p}^{abs})"),
            PAdic::Unit { val, unit, rel } => {
                // balanced residue: -2 rather than p^rel - 2
                let m = num_traits::pow(BigInt::from(*p), *rel as usize);
                let u = if unit * 2u32 > m { unit - &m } else { unit.clone() };
                format!("{p}^{val} * {u} : prec {rel}")
            }
        },
        (FieldKind::QuadExt { base, d, .. }, Value::Quad(ab)) => {
            let a = base.elem(ab.0.clone());
            let b = base.elem(ab.1.clone());
            let root = format!("sqrt({d})");
            let wrap = |s: String| if s.contains(' ') { format!("({s})") } else { s };
            let bpart = if b.is_one() {
                root
            } else if (-&b).is_one() {
                format!("-{root}")
            } else {
                format!("{}*{root}", wrap(b.to_string()))
            };
            match (a.is_zero(), b.is_zero()) {
                (_, true) => a.to_string(),
                (true, false) => bpart,
                (false, false) => format!("{} + {bpart}", wrap(a.to_string())),
            }
        }
        (_, Value::RatFn(nd)) => {
            let num = format_poly(&nd.0, "t");
            if nd.1 == [1] {
                num
            } else {
                format!("({num})/({})", format_poly(&nd.1, "t"))
            }
        }
        _ => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fields() {
        assert_eq!(parse_field("Q").unwrap(), Field::rationals());
        assert_eq!(parse_field("F5").unwrap(), Field::prime(5).unwrap());
        assert_eq!(parse_field("F9").unwrap(), Field::finite(9).unwrap());
        assert_eq!(parse_field("GF(9)").unwrap(), Field::finite(9).unwrap());
        assert_eq!(parse_field("F9[2,2,1]").unwrap().to_string(), "F9[2,2,1]");
        assert_eq!(parse_field("Q3").unwrap(), Field::padic(3, 20).unwrap());
        assert_eq!(parse_field("Qp(5,12)").unwrap(), Field::padic(5, 12).unwrap());
        assert_eq!(parse_field("F2(t)").unwrap(), Field::rational_functions(2).unwrap());
        let k = parse_field("Q(sqrt(5))(sqrt(10))").unwrap();
        assert_eq!(k.tower().len(), 3);
        assert!(parse_field("Q(sqrt(4))").is_err());
        assert!(parse_field("F6").is_err());
    }

    #[test]
    fn elements_round_trip() {
        let cases = [
            ("Q", "-3/4"),
            ("F11", "7 (mod 11)"),
            ("F9", "[1,2] (mod 3, x^2+1)"),
            ("Q3", "3^-1 * 1 : prec 5"),
            ("Q5", "7/3"),
            ("Q(sqrt(5))", "1/2 + 3*sqrt(5)"),
            ("Q(sqrt(5))(sqrt(10))", "(1 + sqrt(5)) - 2/3*sqrt(10)"),
            ("F2(t)", "(1+t)/(1+t+t^2) (mod 2)"),
            ("F5(t)", "3*t^2 + 1"),
        ];
        for (f, e) in cases {
            let field = parse_field(f).unwrap();
            let x = parse_elem(&field, e).unwrap();
            let back = parse_elem(&field, &x.to_string()).unwrap();
            assert_eq!(x, back, "{f}: {e} -> {x}");
        }
        let f11 = parse_field("F11").unwrap();
        assert_eq!(parse_elem(&f11, "7 (mod 11)").unwrap(), f11.int(7));
        assert!(parse_elem(&f11, "7 (mod 13)").is_err());
        let q3 = parse_field("Q3").unwrap();
        let x = parse_elem(&q3, "3^-1 * 1 : prec 5").unwrap();
        assert_eq!(x.precision(), Some(5));
    }
}
