//! Text format shared by the polynomial types: terms joined by `+`/`-`,
//! monomials such as `3*x1^2*x2`, whitespace ignored.

use crate::error::{Error, Result};

/// A parsed term: coefficient and `(variable, power)` factors.
pub(crate) type Term = (f64, Vec<(String, u32)>);

pub(crate) fn parse_terms(src: &str) -> Result<Vec<Term>> {
    let s: Vec<char> = src.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut pos = 0;
    let mut terms = Vec::new();
    while pos < s.len() {
        let mut sign = 1.0;
        if pos == 0 || matches!(s[pos], '+' | '-') {
            while pos < s.len() && matches!(s[pos], '+' | '-') {
                if s[pos] == '-' {
                    sign = -sign;
                }
                pos += 1;
            }
        }
        let (term, next) = parse_term(&s, pos)?;
        terms.push((sign * term.0, term.1));
        pos = next;
        if pos < s.len() && !matches!(s[pos], '+' | '-') {
            return Err(Error::Parse(format!(
                "unexpected `{}` at position {pos}",
                s[pos]
            )));
        }
    }
    Ok(terms)
}

fn parse_term(s: &[char], mut pos: usize) -> Result<(Term, usize)> {
    let mut coef = 1.0;
    let mut vars = Vec::new();
    loop {
        if pos >= s.len() {
            return Err(Error::Parse("dangling operator".into()));
        }
        let c = s[pos];
        if c.is_ascii_digit() || c == '.' {
            let (v, next) = parse_number(s, pos)?;
            coef *= v;
            pos = next;
        } else if c.is_ascii_alphabetic() {
            let start = pos;
            while pos < s.len() && (s[pos].is_ascii_alphanumeric() || s[pos] == '_') {
                pos += 1;
            }
            let name: String = s[start..pos].iter().collect();
            let mut power = 1u32;
            if pos < s.len() && s[pos] == '^' {
                pos += 1;
                let start = pos;
                while pos < s.len() && s[pos].is_ascii_digit() {
                    pos += 1;
                }
                let digits: String = s[start..pos].iter().collect();
                power = digits
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent after `{name}^`")))?;
            }
            vars.push((name, power));
        } else {
            return Err(Error::Parse(format!("unexpected `{c}` at position {pos}")));
        }
        if pos < s.len() && s[pos] == '*' {
            pos += 1;
            continue;
        }
        return Ok(((coef, vars), pos));
    }
}

fn parse_number(s: &[char], mut pos: usize) -> Result<(f64, usize)> {
    let start = pos;
    while pos < s.len() && (s[pos].is_ascii_digit() || s[pos] == '.') {
        pos += 1;
    }
    if pos < s.len() && matches!(s[pos], 'e' | 'E') {
        let mut look = pos + 1;
        if look < s.len() && matches!(s[look], '+' | '-') {
            look += 1;
        }
        if look < s.len() && s[look].is_ascii_digit() {
            pos = look;
            while pos < s.len() && s[pos].is_ascii_digit() {
                pos += 1;
            }
        }
    }
    let text: String = s[start..pos].iter().collect();
    text.parse::<f64>()
        .map(|v| (v, pos))
        .map_err(|_| Error::Parse(format!("bad number `{text}`")))
}

/// Format terms already sorted in output order. Unit coefficients are
/// omitted on non-constant monomials.
pub(crate) fn format_terms(terms: &[Term]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (c, vars)) in terms.iter().enumerate() {
        let neg = *c < 0.0;
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        let a = c.abs();
        let mut parts: Vec<String> = Vec::new();
        if vars.is_empty() || a != 1.0 {
            parts.push(format!("{a}"));
        }
        for (name, p) in vars {
            if *p == 1 {
                parts.push(name.clone());
            } else {
                parts.push(format!("{name}^{p}"));
            }
        }
        out.push_str(&parts.join("*"));
    }
    out
}
