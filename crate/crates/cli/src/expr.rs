//! Real-number expressions for angles and matrix entries.
//!
//! Accepts decimal literals, `pi`, `+ - * /`, parentheses and the functions
//! `sqrt`, `sin`, `cos`, `asin`, `acos`, so the endpoints of every range
//! profile can be written exactly (`pi/4`, `acos(1/sqrt(3))`, `2*pi`).
//! Dividing `pi` by a power of two is exact, so `pi/4` is exactly `FRAC_PI_4`.

use std::f64::consts::PI;

pub fn parse(src: &str) -> Result<f64, String> {
    let mut p = Parser {
        src,
        chars: src.char_indices().peekable(),
    };
    let v = p.sum()?;
    p.skip_ws();
    if let Some(&(i, ch)) = p.chars.peek() {
        return Err(format!("unexpected `{ch}` at offset {i} in `{src}`"));
    }
    if !v.is_finite() {
        return Err(format!("`{src}` is not a finite number"));
    }
    Ok(v)
}

struct Parser<'a> {
    src: &'a str,
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.chars.next_if(|(_, c)| c.is_whitespace()).is_some() {}
    }

    fn eat(&mut self, want: char) -> bool {
        self.skip_ws();
        self.chars.next_if(|&(_, c)| c == want).is_some()
    }

    fn sum(&mut self) -> Result<f64, String> {
        let mut v = self.product()?;
        loop {
            if self.eat('+') {
                v += self.product()?;
            } else if self.eat('-') {
                v -= self.product()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn product(&mut self) -> Result<f64, String> {
        let mut v = self.unary()?;
        loop {
            if self.eat('*') {
                v *= self.unary()?;
            } else if self.eat('/') {
                v /= self.unary()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn unary(&mut self) -> Result<f64, String> {
        if self.eat('-') {
            Ok(-self.unary()?)
        } else if self.eat('+') {
            self.unary()
        } else {
            self.atom()
        }
    }

    fn atom(&mut self) -> Result<f64, String> {
        self.skip_ws();
        if self.eat('(') {
            let v = self.sum()?;
            if !self.eat(')') {
                return Err(format!("missing `)` in `{}`", self.src));
            }
            return Ok(v);
        }
        let Some(&(start, first)) = self.chars.peek() else {
            return Err(format!("expression `{}` ends early", self.src));
        };
        if first.is_ascii_alphabetic() {
            let mut end = start;
            while let Some((i, c)) = self.chars.next_if(|(_, c)| c.is_ascii_alphanumeric()) {
                end = i + c.len_utf8();
            }
            let name = &self.src[start..end];
            if name == "pi" {
                return Ok(PI);
            }
            let f: fn(f64) -> f64 = match name {
                "sqrt" => f64::sqrt,
                "sin" => f64::sin,
                "cos" => f64::cos,
                "asin" => f64::asin,
                "acos" => f64::acos,
                _ => return Err(format!("unknown name `{name}` in `{}`", self.src)),
            };
            if !self.eat('(') {
                return Err(format!("`{name}` needs parentheses in `{}`", self.src));
            }
            let arg = self.sum()?;
            if !self.eat(')') {
                return Err(format!("missing `)` in `{}`", self.src));
            }
            return Ok(f(arg));
        }
        // decimal literal with optional exponent
        let mut end = start;
        let mut prev = ' ';
        while let Some((i, c)) = self.chars.next_if(|&(_, c)| {
            c.is_ascii_digit()
                || c == '.'
                || c == 'e'
                || c == 'E'
                || ((c == '-' || c == '+') && (prev == 'e' || prev == 'E'))
        }) {
            end = i + c.len_utf8();
            prev = c;
        }
        let lit = &self.src[start..end];
        lit.parse::<f64>()
            .map_err(|_| format!("cannot read a number at offset {start} in `{}`", self.src))
    }
}

/// A comma- or whitespace-separated list of expressions.
pub fn parse_list(src: &str) -> Result<Vec<f64>, String> {
    src.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(parse)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

    #[test]
    fn pi_fractions_are_exact() {
        assert_eq!(parse("pi/4").unwrap(), FRAC_PI_4);
        assert_eq!(parse("pi/2").unwrap(), FRAC_PI_2);
        assert!((parse("pi / 3").unwrap() - FRAC_PI_3).abs() <= f64::EPSILON);
        assert_eq!(parse("2*pi").unwrap(), 2.0 * PI);
        assert_eq!(parse("-pi").unwrap(), -PI);
    }

    #[test]
    fn arithmetic_and_functions() {
        assert_eq!(parse("1e-3").unwrap(), 1e-3);
        assert_eq!(parse("2.5E+2").unwrap(), 250.0);
        assert_eq!(parse("(1+2)*3").unwrap(), 9.0);
        assert_eq!(parse("1 - 2 - 3").unwrap(), -4.0);
        assert_eq!(
            parse("acos(1/sqrt(3))").unwrap(),
            (1.0 / 3f64.sqrt()).acos()
        );
        assert_eq!(parse("0.5").unwrap(), 0.5);
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "pi4", "1/", "(1", "foo(1)", "1 2", "sqrt 2", "1/0"] {
            assert!(parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list("0, pi/2 ,1").unwrap(), vec![0.0, FRAC_PI_2, 1.0]);
        assert_eq!(parse_list("1 2\t3").unwrap(), vec![1.0, 2.0, 3.0]);
    }
}
