use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(i64),
    Sym(&'static str),
    Eof,
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Eof => "end of input".to_string(),
        }
    }
}

const SYMBOLS: &[&str] = &[
    "<->", "->", "!=", "<=", ">=", "(", ")", ".", "~", "!", "&", "|", "=", "<", ">", "+", "-", "@", ":",
];

/// Splits a formula document into tokens; `#` starts a line comment.
///
/// `X`, `F`, `G` and `U` are operators unless directly followed by `@`,
/// in which case they name a system variable.
pub(crate) fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    for (lno, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            let at = |tok| Token { tok, line: lno + 1, col };
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                let tok = match word.as_str() {
                    "X" | "F" | "G" | "U" if chars.get(i) != Some(&'@') => {
                        Tok::Sym(match word.as_str() {
                            "X" => "X",
                            "F" => "F",
                            "G" => "G",
                            _ => "U",
                        })
                    }
                    _ => Tok::Ident(word),
                };
                out.push(at(tok));
                continue;
            }
            if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let n = s.parse::<i64>().map_err(|_| Error::Syntax {
                    line: lno + 1,
                    col,
                    expected: "integer literal".into(),
                    found: format!("`{s}`"),
                })?;
                out.push(at(Tok::Int(n)));
                continue;
            }
            let rest: String = chars[i..(i + 3).min(chars.len())].iter().collect();
            match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
                Some(s) => {
                    out.push(at(Tok::Sym(s)));
                    i += s.chars().count();
                }
                None => {
                    return Err(Error::Syntax {
                        line: lno + 1,
                        col,
                        expected: "a token".into(),
                        found: format!("`{c}`"),
                    })
                }
            }
        }
    }
    let (line, col) = match text.lines().enumerate().last() {
        Some((n, l)) => (n + 1, l.chars().count() + 1),
        None => (1, 1),
    };
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        lex(s).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn operators_versus_variables() {
        assert_eq!(
            toks("G X@b"),
            vec![Tok::Sym("G"), Tok::Ident("X".into()), Tok::Sym("@"), Tok::Ident("b".into()), Tok::Eof]
        );
        assert_eq!(toks("a <-> b -> c != d")[1], Tok::Sym("<->"));
        assert_eq!(toks("a <= 3")[1], Tok::Sym("<="));
    }
}
