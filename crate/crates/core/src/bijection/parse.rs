//! Parser for the textual bijection spec `name[:key=value[,key=value]*]`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{BijectionKind, BijectionSpec, DEFAULT_CANTOR_DEPTH, DEFAULT_OMEGA_LAMBDA};

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse { position: self.pos, message: message.into() }
    }

    fn ident(&mut self, what: &str) -> Result<&'a str> {
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
            Some(c) => return Err(self.error(format!("expected {what}, found '{c}'"))),
            None => return Err(self.error(format!("expected {what}, found end of input"))),
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
            self.bump();
        }
        Ok(&self.src[start..self.pos])
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.bump() {
            Some(c) if c == want => Ok(()),
            Some(c) => {
                self.pos -= c.len_utf8();
                Err(self.error(format!("expected '{want}', found '{c}'")))
            }
            None => Err(self.error(format!("expected '{want}', found end of input"))),
        }
    }

    fn value(&mut self) -> Result<(usize, &'a str)> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c != ',') {
            self.bump();
        }
        let raw = &self.src[start..self.pos];
        if raw.is_empty() {
            return Err(self.error("expected a value"));
        }
        Ok((start, raw))
    }
}

fn number(key: &str, raw: &str) -> Result<f64> {
    let v: f64 = raw.parse().map_err(|_| Error::Param(format!("{key}={raw} is not a decimal number")))?;
    if !v.is_finite() {
        return Err(Error::Param(format!("{key}={raw} is not finite")));
    }
    Ok(v)
}

fn integer(key: &str, raw: &str) -> Result<u32> {
    let v = number(key, raw)?;
    if v.fract() != 0.0 || v < 0.0 || v > u32::MAX as f64 {
        return Err(Error::Param(format!("{key}={raw} must be a non-negative integer")));
    }
    Ok(v as u32)
}

/// Parse and validate a bijection spec, filling defaults.
///
/// Defaults: `linear` a=1, b=0; `cantor` depth=48; `sinh_cosmo`
/// omega_lambda=0.7. `power` requires `n`.
pub fn parse_bijection_spec<T: Scalar>(text: &str) -> Result<BijectionSpec<T>> {
    let mut cur = Cursor { src: text.trim(), pos: 0 };
    let name = cur.ident("a bijection name")?;
    let mut params: Vec<(&str, usize, &str)> = Vec::new();
    if cur.peek().is_some() {
        cur.expect(':')?;
        loop {
            let key = cur.ident("a parameter name")?;
            cur.expect('=')?;
            let (at, raw) = cur.value()?;
            if params.iter().any(|(k, _, _)| *k == key) {
                return Err(Error::Param(format!("duplicate parameter '{key}'")));
            }
            params.push((key, at, raw));
            if cur.peek().is_none() {
                break;
            }
            cur.expect(',')?;
        }
    }

    let allowed: &[&str] = match name {
        "identity" | "arctanh" | "tanh" | "exp" | "log" | "reciprocal" => &[],
        "linear" => &["a", "b"],
        "power" => &["n"],
        "sinh_cosmo" => &["omega_lambda"],
        "cantor" => &["depth"],
        other => return Err(Error::Param(format!("unknown bijection '{other}'"))),
    };
    if let Some((key, _, _)) = params.iter().find(|(k, _, _)| !allowed.contains(k)) {
        return Err(Error::Param(format!("'{name}' takes no parameter '{key}'")));
    }
    let get = |key: &str| params.iter().find(|(k, _, _)| *k == key).map(|(_, _, raw)| *raw);
    let real = |key: &str, default: f64| -> Result<T> {
        let v = match get(key) {
            Some(raw) => number(key, raw)?,
            None => default,
        };
        T::from_f64(v).ok_or_else(|| Error::Param(format!("{key}={v} not representable")))
    };

    let kind = match name {
        "identity" => BijectionKind::Identity,
        "arctanh" => BijectionKind::Arctanh,
        "tanh" => BijectionKind::Tanh,
        "exp" => BijectionKind::Exp,
        "log" => BijectionKind::Log,
        "reciprocal" => BijectionKind::Reciprocal,
        "linear" => BijectionKind::Linear { a: real("a", 1.0)?, b: real("b", 0.0)? },
        "power" => {
            let raw = get("n").ok_or_else(|| Error::Param("power requires n".into()))?;
            BijectionKind::Power { n: integer("n", raw)? }
        }
        "sinh_cosmo" => BijectionKind::SinhCosmo { omega_lambda: real("omega_lambda", DEFAULT_OMEGA_LAMBDA)? },
        "cantor" => BijectionKind::Cantor {
            depth: match get("depth") {
                Some(raw) => integer("depth", raw)?,
                None => DEFAULT_CANTOR_DEPTH,
            },
        },
        _ => unreachable!("names filtered above"),
    };
    BijectionSpec::new(kind)
}
