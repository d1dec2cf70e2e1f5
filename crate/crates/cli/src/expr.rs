//! Series mini-expressions accepted by `--series` and `--kernel`.
//!
//! * `[1, -2]`, `[[1, 0], [0.5, 0.25]]` or a full series object (JSON)
//! * polynomials such as `1+0.5z-0.25z^2` or `1+(0.3-0.2i)z^3`
//! * `rat(x, y)` for `(1 + xz) / (1 + yz)`
//! * `ones` (the convolution identity) and `e` (the constant 1)

use convdual::{TruncSeries, C};

pub fn parse_series(text: &str, trunc: usize) -> Result<TruncSeries, String> {
    let t = text.trim();
    if t.starts_with('[') || t.starts_with('{') {
        return serde_json::from_str::<TruncSeries>(t).map_err(|e| format!("series literal: {e}"));
    }
    match t {
        "ones" => return Ok(TruncSeries::ones(trunc)),
        "e" => return Ok(TruncSeries::identity(0)),
        _ => {}
    }
    if let Some(inner) = t.strip_prefix("rat(").and_then(|s| s.strip_suffix(')')) {
        let (x, y) = split_pair(inner).ok_or("rat(x, y) needs two arguments")?;
        let x = parse_complex(x)?;
        let y = parse_complex(y)?;
        return TruncSeries::from_rational(x, y, trunc).map_err(|e| e.to_string());
    }
    let coeffs = Parser::new(t).polynomial()?;
    TruncSeries::polynomial(coeffs).map_err(|e| e.to_string())
}

/// A complex literal such as `0.5`, `-0.2i`, `0.3-0.4i` or `(1+i)`.
pub fn parse_complex(text: &str) -> Result<C, String> {
    let mut p = Parser::new(text);
    let z = p.complex_sum()?;
    p.end()?;
    Ok(z)
}

fn split_pair(s: &str) -> Option<(&str, &str)> {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some((&s[..i], &s[i + 1..])),
            _ => {}
        }
    }
    None
}

const MAX_POWER: usize = 4096;

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Self {
        Parser {
            chars: text.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn end(&self) -> Result<(), String> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(format!("unexpected '{c}' at position {}", self.pos + 1)),
        }
    }

    fn polynomial(&mut self) -> Result<Vec<C>, String> {
        if self.chars.is_empty() {
            return Err("empty series expression".into());
        }
        let mut coeffs = vec![C::new(0.0, 0.0)];
        let mut first = true;
        while self.peek().is_some() {
            let sign = if self.eat('-') {
                -1.0
            } else if self.eat('+') || first {
                1.0
            } else {
                return Err(format!("expected '+' or '-' at position {}", self.pos + 1));
            };
            first = false;
            let (c, k) = self.term()?;
            if k >= coeffs.len() {
                coeffs.resize(k + 1, C::new(0.0, 0.0));
            }
            coeffs[k] += c * sign;
        }
        Ok(coeffs)
    }

    fn term(&mut self) -> Result<(C, usize), String> {
        let coeff = match self.peek() {
            Some('z') => None,
            _ => Some(self.coefficient()?),
        };
        self.eat('*');
        if !self.eat('z') {
            return coeff.map(|c| (c, 0)).ok_or_else(|| "missing term".into());
        }
        let power = if self.eat('^') { self.integer()? } else { 1 };
        if power > MAX_POWER {
            return Err(format!("power {power} exceeds {MAX_POWER}"));
        }
        Ok((coeff.unwrap_or(C::new(1.0, 0.0)), power))
    }

    fn coefficient(&mut self) -> Result<C, String> {
        if self.eat('(') {
            let z = self.complex_sum()?;
            if !self.eat(')') {
                return Err(format!("expected ')' at position {}", self.pos + 1));
            }
            return Ok(z);
        }
        self.imaginary_or_real()
    }

    fn complex_sum(&mut self) -> Result<C, String> {
        let mut total = C::new(0.0, 0.0);
        let mut first = true;
        while let Some(c) = self.peek() {
            if c == ')' {
                break;
            }
            let sign = if self.eat('-') {
                -1.0
            } else if self.eat('+') || first {
                1.0
            } else {
                return Err(format!("expected '+' or '-' at position {}", self.pos + 1));
            };
            first = false;
            total += self.coefficient()? * sign;
        }
        if first {
            return Err("empty complex number".into());
        }
        Ok(total)
    }

    fn imaginary_or_real(&mut self) -> Result<C, String> {
        if self.eat('i') {
            return Ok(C::new(0.0, 1.0));
        }
        let x = self.number()?;
        Ok(if self.eat('i') { C::new(0.0, x) } else { C::new(x, 0.0) })
    }

    fn number(&mut self) -> Result<f64, String> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == '.') {
            self.pos += 1;
        }
        if self.pos > start && matches!(self.peek(), Some('e' | 'E')) {
            let mark = self.pos;
            self.pos += 1;
            let _ = self.eat('+') || self.eat('-');
            if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    self.pos += 1;
                }
            } else {
                self.pos = mark;
            }
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        let x: f64 = s
            .parse()
            .map_err(|_| format!("expected a number at position {}", start + 1))?;
        if !x.is_finite() {
            return Err(format!("number '{s}' is not finite"));
        }
        Ok(x)
    }

    fn integer(&mut self) -> Result<usize, String> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| format!("expected an exponent at position {}", start + 1))
    }
}
