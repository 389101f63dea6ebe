//! Parser for the line-oriented `.ats` system format.
//!
//! ```text
//! system fig4
//! var a : int(0..1)
//! state s0 { a = 0 } init
//! state s1 { a = 1 }
//! trans s0 -> s0, s1
//! trans s1 -> s0
//! ```

use std::collections::HashMap;

use super::{Sort, StateId, SystemBuilder, TransitionSystem, Value};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    Sym(&'static str),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Sym(s) => format!("`{s}`"),
        }
    }
}

struct Line {
    no: usize,
    toks: Vec<(usize, Tok)>,
    end_col: usize,
    pos: usize,
}

fn syntax(line: usize, col: usize, expected: &str, found: String) -> Error {
    Error::Syntax {
        line,
        col,
        expected: expected.to_string(),
        found,
    }
}

fn lex_line(no: usize, text: &str) -> Result<Line> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
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
            toks.push((col, Tok::Ident(chars[start..i].iter().collect())));
            continue;
        }
        let negative = c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit());
        if c.is_ascii_digit() || negative {
            let start = i;
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let n = s
                .parse::<i64>()
                .map_err(|_| syntax(no, col, "integer literal", format!("`{s}`")))?;
            toks.push((col, Tok::Int(n)));
            continue;
        }
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let sym = match two.as_str() {
            "->" => Some("->"),
            ".." => Some(".."),
            _ => None,
        };
        if let Some(s) = sym {
            toks.push((col, Tok::Sym(s)));
            i += 2;
            continue;
        }
        let sym = match c {
            '{' => "{",
            '}' => "}",
            ',' => ",",
            '=' => "=",
            ':' => ":",
            '(' => "(",
            ')' => ")",
            _ => return Err(syntax(no, col, "a token", format!("`{c}`"))),
        };
        toks.push((col, Tok::Sym(sym)));
        i += 1;
    }
    Ok(Line {
        no,
        toks,
        end_col: chars.len() + 1,
        pos: 0,
    })
}

impl Line {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(c, _)| *c)
    }

    fn found(&self) -> String {
        self.peek().map_or_else(|| "end of line".to_string(), Tok::describe)
    }

    fn ident(&mut self, what: &str) -> Result<(usize, String)> {
        let col = self.col();
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok((col, s))
            }
            _ => Err(syntax(self.no, col, what, self.found())),
        }
    }

    fn int(&mut self) -> Result<i64> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => Err(syntax(self.no, self.col(), "integer", self.found())),
        }
    }

    fn sym(&mut self, s: &'static str) -> Result<()> {
        if self.peek() == Some(&Tok::Sym(s)) {
            self.pos += 1;
            Ok(())
        } else {
            Err(syntax(self.no, self.col(), &format!("`{s}`"), self.found()))
        }
    }

    fn eat(&mut self, s: &'static str) -> bool {
        if self.peek() == Some(&Tok::Sym(s)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn end(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(syntax(self.no, self.col(), "end of line", self.found())),
        }
    }

    fn literal(&mut self) -> Result<Value> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(Value::Int(n))
            }
            Some(Tok::Ident(s)) if s == "true" || s == "false" => {
                let b = s == "true";
                self.pos += 1;
                Ok(Value::Bool(b))
            }
            _ => Err(syntax(self.no, self.col(), "literal", self.found())),
        }
    }
}

/// Parses and validates an `.ats` document.
pub fn parse_system(text: &str) -> Result<TransitionSystem> {
    let mut builder: Option<SystemBuilder> = None;
    let mut state_ids: HashMap<String, StateId> = HashMap::new();
    let mut trans: Vec<(usize, usize, String, Vec<(usize, String)>)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let mut line = lex_line(idx + 1, raw)?;
        if line.toks.is_empty() {
            continue;
        }
        let (kcol, keyword) = line.ident("keyword")?;
        if builder.is_none() && keyword != "system" {
            return Err(syntax(line.no, kcol, "`system` header", format!("`{keyword}`")));
        }
        match keyword.as_str() {
            "system" => {
                if builder.is_some() {
                    return Err(syntax(line.no, kcol, "a declaration", "second `system` header".into()));
                }
                let (_, name) = line.ident("system name")?;
                line.end()?;
                builder = Some(SystemBuilder::new(name));
            }
            "var" => {
                let (_, name) = line.ident("variable name")?;
                line.sym(":")?;
                let (scol, sort) = line.ident("`bool` or `int`")?;
                let sort = match sort.as_str() {
                    "bool" => Sort::Bool,
                    "int" => {
                        line.sym("(")?;
                        let lo = line.int()?;
                        line.sym("..")?;
                        let hi = line.int()?;
                        line.sym(")")?;
                        Sort::Int { lo, hi }
                    }
                    other => return Err(syntax(line.no, scol, "`bool` or `int`", format!("`{other}`"))),
                };
                line.end()?;
                builder.as_mut().expect("header").var(name, sort);
            }
            "state" => {
                let (_, name) = line.ident("state name")?;
                line.sym("{")?;
                let mut label = Vec::new();
                if !line.eat("}") {
                    loop {
                        let (_, var) = line.ident("variable name")?;
                        line.sym("=")?;
                        let v = line.literal()?;
                        label.push((var, v));
                        if line.eat("}") {
                            break;
                        }
                        line.sym(",")?;
                    }
                }
                let is_init = match line.peek() {
                    Some(Tok::Ident(s)) if s == "init" => {
                        line.pos += 1;
                        true
                    }
                    _ => false,
                };
                line.end()?;
                let b = builder.as_mut().expect("header");
                let refs: Vec<(&str, Value)> = label.iter().map(|(k, v)| (k.as_str(), *v)).collect();
                if state_ids.contains_key(&name) {
                    return Err(Error::Semantic(format!("duplicate state `{name}` (line {})", line.no)));
                }
                let id = b.state(name.clone(), &refs);
                state_ids.insert(name, id);
                if is_init {
                    b.init(id);
                }
            }
            "trans" => {
                let (fcol, from) = line.ident("source state")?;
                line.sym("->")?;
                let mut targets = vec![line.ident("target state")?];
                while line.eat(",") {
                    targets.push(line.ident("target state")?);
                }
                line.end()?;
                trans.push((line.no, fcol, from, targets));
            }
            other => {
                return Err(syntax(
                    line.no,
                    kcol,
                    "`system`, `var`, `state` or `trans`",
                    format!("`{other}`"),
                ))
            }
        }
    }

    let Some(mut builder) = builder else {
        return Err(syntax(1, 1, "`system` header", "end of input".into()));
    };
    for (no, col, from, targets) in trans {
        let resolve = |name: &str, col: usize| {
            state_ids
                .get(name)
                .copied()
                .ok_or_else(|| Error::Semantic(format!("unknown state `{name}` at {no}:{col}")))
        };
        let a = resolve(&from, col)?;
        for (tcol, t) in targets {
            let b = resolve(&t, tcol)?;
            builder.edge(a, b);
        }
    }
    builder.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG4: &str = "\
system fig4
var a : int(0..1)
state s0 { a = 0 } init
state s1 { a = 1 }
state s2 { a = 1 }
trans s0 -> s0, s1
trans s1 -> s2
trans s2 -> s1, s0
";

    #[test]
    fn parses_overview_system() {
        let ts = parse_system(FIG4).unwrap();
        assert_eq!(ts.num_states(), 3);
        assert_eq!(ts.state_name(ts.init()), "s0");
        assert_eq!(ts.succ(0), &[0, 1]);
        assert_eq!(ts.succ(2), &[0, 1]);
        assert_eq!(ts.value(1, 0), Value::Int(1));
    }

    #[test]
    fn single_state_self_loop() {
        let ts = parse_system("system one\nvar b : bool\nstate s { b = true } init\ntrans s -> s\n").unwrap();
        assert_eq!(ts.num_states(), 1);
        assert_eq!(ts.succ(0), &[0]);
    }

    #[test]
    fn missing_successor_is_semantic_error() {
        let err = parse_system("system t\nstate s {} init\nstate u {}\ntrans s -> u\n").unwrap_err();
        assert_eq!(err, Error::Semantic("state without successor: `u`".into()));
    }

    #[test]
    fn trans_lines_accumulate() {
        let ts = parse_system("system t\nstate s {} init\nstate u {}\ntrans s -> u\ntrans s -> s\ntrans u -> u\n").unwrap();
        assert_eq!(ts.succ(0), &[0, 1]);
    }

    #[test]
    fn syntax_error_reports_position() {
        let err = parse_system("system t\nvar x : int(0 .. )\n").unwrap_err();
        match err {
            Error::Syntax { line, col, expected, .. } => {
                assert_eq!((line, col), (2, 18));
                assert_eq!(expected, "integer");
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn semantic_errors() {
        let dup = "system t\nstate s {} init\nstate s {}\ntrans s -> s\n";
        assert!(parse_system(dup).unwrap_err().to_string().contains("duplicate state"));
        let missing = "system t\nvar a : bool\nstate s {} init\ntrans s -> s\n";
        assert!(parse_system(missing).unwrap_err().to_string().contains("misses variable"));
        let range = "system t\nvar a : int(0..1)\nstate s { a = 3 } init\ntrans s -> s\n";
        assert!(parse_system(range).unwrap_err().to_string().contains("outside"));
        let none = "system t\nstate s {}\ntrans s -> s\n";
        assert!(parse_system(none).unwrap_err().to_string().contains("no init"));
        let unknown = "system t\nstate s {} init\ntrans s -> q\n";
        assert!(parse_system(unknown).unwrap_err().to_string().contains("unknown state"));
    }

    #[test]
    fn comments_and_negative_ranges() {
        let ts = parse_system("# header\nsystem t # trailing\nvar x : int(-2..2)\nstate s { x = -2 } init\ntrans s -> s\n").unwrap();
        assert_eq!(ts.value(0, 0), Value::Int(-2));
    }
}
