//! Line-oriented text formats for stabilizer specs and codes.
//!
//! ```text
//! # comment
//! d 4
//! n 3
//! m 3
//! g 0 2 2 | 1 0 0
//! g 2 0 0 | 0 1 0
//! g 2 0 0 | 0 0 1
//! phases 0 0 0          (optional)
//! delta 2               (code files)
//! c 0 0 0               (code files; first line all zero)
//! c 0 1 1
//! ```
//!
//! Generator lines carry the X exponents before `|` and the Z exponents
//! after it. Writers emit no comments and omit an all-zero `phases` line,
//! so files produced here read back and re-write byte for byte.

use std::fmt::Write as _;

use crate::cws::CwsCode;
use crate::error::{Error, Result};
use crate::stabilizer::StabilizerSpec;
use crate::zd::{ZdMatrix, ZdVector};

/// Non-blank lines as `(line number, tokens)`, comments stripped.
type Tokens<'a> = Box<dyn Iterator<Item = (usize, Vec<&'a str>)> + 'a>;

struct Lines<'a> {
    inner: std::iter::Peekable<Tokens<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: Tokens<'a> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("")))
                .map(|(i, l)| (i, l.split_whitespace().collect::<Vec<_>>()))
                .filter(|(_, t)| !t.is_empty()),
        );
        Lines {
            inner: it.peekable(),
            last: 0,
        }
    }

    fn next(&mut self) -> Option<(usize, Vec<&'a str>)> {
        let r = self.inner.next();
        if let Some((i, _)) = &r {
            self.last = *i;
        }
        r
    }

    fn peek_key(&mut self) -> Option<&'a str> {
        self.inner.peek().map(|(_, t)| t[0])
    }

    fn err(&self, line: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    fn expect(&mut self, key: &str) -> Result<(usize, Vec<&'a str>)> {
        match self.next() {
            Some((i, t)) if t[0] == key => Ok((i, t)),
            Some((i, t)) => Err(self.err(i, format!("expected `{key}`, found `{}`", t[0]))),
            None => Err(self.err(self.last + 1, format!("unexpected end of file, expected `{key}`"))),
        }
    }

    fn header(&mut self, key: &str) -> Result<usize> {
        let (i, t) = self.expect(key)?;
        if t.len() != 2 {
            return Err(self.err(i, format!("`{key}` takes one integer")));
        }
        t[1].parse()
            .map_err(|_| self.err(i, format!("bad integer `{}`", t[1])))
    }
}

fn parse_row(line: usize, tokens: &[&str], d: u32) -> Result<Vec<u32>> {
    tokens
        .iter()
        .map(|t| {
            let v: u32 = t.parse().map_err(|_| Error::Parse {
                line,
                message: format!("bad integer `{t}`"),
            })?;
            if v >= d {
                return Err(Error::Parse {
                    line,
                    message: format!("entry {v} out of range for d = {d}"),
                });
            }
            Ok(v)
        })
        .collect()
}

fn parse_spec_block(lines: &mut Lines<'_>) -> Result<StabilizerSpec> {
    let d = lines.header("d")?;
    let d = u32::try_from(d)
        .ok()
        .filter(|&d| d >= 2)
        .ok_or_else(|| lines.err(lines.last, "d must be at least 2"))?;
    let n = lines.header("n")?;
    if n == 0 {
        return Err(lines.err(lines.last, "n must be positive"));
    }
    let m = lines.header("m")?;
    let mut x = ZdMatrix::zeros(d, m, n);
    let mut z = ZdMatrix::zeros(d, m, n);
    for k in 0..m {
        let (i, t) = lines.expect("g")?;
        let bar = t
            .iter()
            .position(|&s| s == "|")
            .ok_or_else(|| lines.err(i, "generator line needs `|`"))?;
        let xs = parse_row(i, &t[1..bar], d)?;
        let zs = parse_row(i, &t[bar + 1..], d)?;
        if xs.len() != n || zs.len() != n {
            return Err(lines.err(i, format!("generator needs {n} X and {n} Z exponents")));
        }
        for l in 0..n {
            x.set(k, l, xs[l]);
            z.set(k, l, zs[l]);
        }
    }
    let phases = if lines.peek_key() == Some("phases") {
        let (i, t) = lines.next().expect("peeked");
        let p = parse_row(i, &t[1..], d)?;
        if p.len() != m {
            return Err(lines.err(i, format!("`phases` needs {m} entries")));
        }
        Some(ZdVector::new(d, p)?)
    } else {
        None
    };
    StabilizerSpec::new(d, n, x, z, phases)
}

fn ensure_end(lines: &mut Lines<'_>) -> Result<()> {
    match lines.next() {
        None => Ok(()),
        Some((i, t)) => Err(lines.err(i, format!("unexpected `{}`", t[0]))),
    }
}

pub fn parse_spec(text: &str) -> Result<StabilizerSpec> {
    let mut lines = Lines::new(text);
    let spec = parse_spec_block(&mut lines)?;
    ensure_end(&mut lines)?;
    Ok(spec)
}

pub fn parse_code(text: &str) -> Result<CwsCode> {
    let mut lines = Lines::new(text);
    let spec = parse_spec_block(&mut lines)?;
    let delta = lines.header("delta")?;
    let mut words = Vec::new();
    while lines.peek_key() == Some("c") {
        let (i, t) = lines.next().expect("peeked");
        let c = parse_row(i, &t[1..], spec.d())?;
        if c.len() != spec.m() {
            return Err(lines.err(i, format!("codeword needs {} entries", spec.m())));
        }
        if words.is_empty() && c.iter().any(|&x| x != 0) {
            return Err(lines.err(i, "the first codeword must be all zeros"));
        }
        words.push(ZdVector::new(spec.d(), c)?);
    }
    if words.is_empty() {
        return Err(lines.err(lines.last + 1, "a code needs at least one `c` line"));
    }
    ensure_end(&mut lines)?;
    CwsCode::new(spec, words, delta, 0)
}

fn join(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

pub fn write_spec(spec: &StabilizerSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "d {}", spec.d());
    let _ = writeln!(out, "n {}", spec.n());
    let _ = writeln!(out, "m {}", spec.m());
    for k in 0..spec.m() {
        let _ = writeln!(
            out,
            "g {} | {}",
            join(spec.x_mat().row(k)),
            join(spec.z_mat().row(k))
        );
    }
    if !spec.phases().is_zero() {
        let _ = writeln!(out, "phases {}", join(spec.phases().entries()));
    }
    out
}

/// Codewords are written in the coordinates of `code.spec`.
pub fn write_code(code: &CwsCode) -> String {
    let mut out = write_spec(&code.spec);
    let _ = writeln!(out, "delta {}", code.delta);
    for c in &code.codewords {
        let _ = writeln!(out, "c {}", join(c.entries()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::example_fixtures;

    const D4: &str = "d 4\nn 3\nm 3\ng 0 2 2 | 1 0 0\ng 2 0 0 | 0 1 0\ng 2 0 0 | 0 0 1\n";

    #[test]
    fn spec_round_trip() {
        let s = parse_spec(D4).unwrap();
        assert_eq!(s, example_fixtures().1.spec);
        assert_eq!(write_spec(&s), D4);
    }

    #[test]
    fn code_round_trip() {
        let text = format!("{D4}delta 2\nc 0 0 0\nc 0 1 1\n");
        let code = parse_code(&text).unwrap();
        assert_eq!(code.codewords.len(), 2);
        assert_eq!(write_code(&code), text);
    }

    #[test]
    fn comments_and_phases() {
        let text = "# ring\nd 2\nn 1  # one qubit\nm 1\ng 0 | 1\nphases 1\n";
        let s = parse_spec(text).unwrap();
        assert_eq!(s.phases().entries(), &[1]);
        assert_eq!(write_spec(&s), "d 2\nn 1\nm 1\ng 0 | 1\nphases 1\n");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases = [
            ("d 4\nn 3\nm 3\ng 0 2 2 | 1 0 0\n", 5),
            ("d 4\nn 3\nm 1\ng 0 2 | 1 0 0\n", 4),
            ("d 4\nn 3\nm 1\ng 0 2 4 | 1 0 0\n", 4),
            ("d 4\nn x\n", 2),
            ("d 2\nn 1\nm 1\ng 0 1\n", 4),
            ("d 2\nn 1\nm 1\ng 0 | 1\nfoo\n", 5),
        ];
        for (text, line) in cases {
            match parse_spec(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn first_codeword_must_be_zero() {
        let text = format!("{D4}delta 2\nc 0 1 1\n");
        assert!(matches!(parse_code(&text), Err(Error::Parse { line: 8, .. })));
    }
}
