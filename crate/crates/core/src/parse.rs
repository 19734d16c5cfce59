//! Textual form of [`FunctionExpr`] and complex literals.
//!
//! ```text
//! expr    := "expaffine(" c "," c "," c "," c ")" | "compose(" expr "," expr ")"
//!          | "iter(" expr "," n ")" | "translate(" expr "," c ")"
//!          | "fatou" | "exp(" c ")" | "explus(" c ")"
//!          | "linear(" c "," c ")" | "identity"
//! c       := "x+yi" | "x" | "yi"
//! ```

use num_complex::Complex64;

use crate::function::{ExprError, FunctionExpr};

fn err(pos: usize, msg: impl Into<String>) -> ExprError {
    ExprError::Parse { pos, msg: msg.into() }
}

/// Parses a complex literal such as `1+0i`, `-2.5e-3-4i`, `3.1`, or `2i`.
pub fn parse_complex(text: &str) -> Result<Complex64, ExprError> {
    parse_complex_at(text, 0)
}

fn parse_real(text: &str, pos: usize) -> Result<f64, ExprError> {
    let v: f64 = text.parse().map_err(|_| err(pos, format!("invalid real number {text:?}")))?;
    if !v.is_finite() {
        return Err(err(pos, format!("non-finite real number {text:?}")));
    }
    Ok(v)
}

fn parse_complex_at(text: &str, pos: usize) -> Result<Complex64, ExprError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(err(pos, "empty complex literal"));
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok(Complex64::new(parse_real(s, pos)?, 0.0));
    };
    // Split at the last sign that is not a leading sign or an exponent sign.
    let bytes = body.as_bytes();
    let split =
        (1..bytes.len()).rev().find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re_txt, im_txt) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im_txt {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => parse_real(t.strip_prefix('+').unwrap_or(t), pos)?,
    };
    Ok(Complex64::new(parse_real(re_txt, pos)?, im))
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn ident(&mut self) -> Result<&'a str, ExprError> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let len = rest.find(|ch: char| !ch.is_ascii_alphanumeric() && ch != '_').unwrap_or(rest.len());
        if len == 0 {
            return Err(err(start, "expected a function name"));
        }
        self.pos += len;
        Ok(&self.src[start..start + len])
    }

    fn expect(&mut self, ch: char) -> Result<(), ExprError> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(ch) {
            self.pos += 1;
            Ok(())
        } else {
            Err(err(self.pos, format!("expected {ch:?}")))
        }
    }

    /// Raw text of one argument, up to the next top-level ',' or ')'.
    fn atom_text(&mut self) -> (&'a str, usize) {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let len = rest.find([',', ')']).unwrap_or(rest.len());
        self.pos += len;
        (rest[..len].trim(), start)
    }

    fn complex_arg(&mut self) -> Result<Complex64, ExprError> {
        let (text, at) = self.atom_text();
        parse_complex_at(text, at)
    }

    fn expr(&mut self) -> Result<FunctionExpr, ExprError> {
        let at = self.pos;
        let name = self.ident()?;
        match name {
            "fatou" => return Ok(FunctionExpr::fatou()),
            "identity" => return Ok(FunctionExpr::identity()),
            _ => {}
        }
        self.expect('(')?;
        let out = match name {
            "expaffine" => {
                let a = self.complex_arg()?;
                self.expect(',')?;
                let b = self.complex_arg()?;
                self.expect(',')?;
                let c = self.complex_arg()?;
                self.expect(',')?;
                let d = self.complex_arg()?;
                FunctionExpr::exp_affine(a, b, c, d)?
            }
            "exp" => FunctionExpr::exp(self.complex_arg()?)?,
            "explus" => FunctionExpr::exp_plus(self.complex_arg()?)?,
            "linear" => {
                let slope = self.complex_arg()?;
                self.expect(',')?;
                FunctionExpr::linear(slope, self.complex_arg()?)?
            }
            "compose" => {
                let outer = self.expr()?;
                self.expect(',')?;
                let inner = self.expr()?;
                outer.compose(&inner)
            }
            "iter" => {
                let base = self.expr()?;
                self.expect(',')?;
                let (text, pos) = self.atom_text();
                let n: u32 = text.parse().map_err(|_| err(pos, format!("invalid iteration count {text:?}")))?;
                base.iterate(n)?
            }
            "translate" => {
                let base = self.expr()?;
                self.expect(',')?;
                base.translate(self.complex_arg()?)
            }
            other => return Err(err(at, format!("unknown function {other:?}"))),
        };
        self.expect(')')?;
        Ok(out)
    }
}

/// Parses the canonical textual form of a function expression.
pub fn parse_expr(text: &str) -> Result<FunctionExpr, ExprError> {
    let mut p = Parser { src: text, pos: 0 };
    let expr = p.expr()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(err(p.pos, "trailing input"));
    }
    Ok(expr)
}

impl std::str::FromStr for FunctionExpr {
    type Err = ExprError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_expr(s)
    }
}
