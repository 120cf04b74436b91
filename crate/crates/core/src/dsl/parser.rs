//! Recursive-descent parser for pulse programs.
//!
//! ```text
//! program   := { statement } ;
//! statement := block | sel | hard | crush | apply ;
//! block     := "block" "{" sel { ";" sel } "}" ;
//! sel       := "sel" INT INT axis ANGLE ;
//! hard      := "hard" ( "all" | INT ) axis ANGLE ;
//! crush     := "crush" [ "ideal" | "order" ] ;
//! apply     := "apply" ( "walsh" | "mixing" | "oracle" FORMULA ) ;
//! axis      := "x" | "y" | "z" ;
//! ```
//!
//! Angles are decimal degrees; `#` starts a comment running to end of line.

use super::ast::{HardTarget, PulseProgram, Sel, Statement, UnitaryRef};
use crate::error::{Error, Result};
use crate::spin::{Axis, CrushMode};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Word(String),
    LBrace,
    RBrace,
    Semi,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Vec<Token> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let line_no = li + 1;
        let code = match line.find('#') {
            Some(p) => &line[..p],
            None => line,
        };
        let chars: Vec<(usize, char)> = code.char_indices().collect();
        let mut i = 0;
        while i < chars.len() {
            let (byte, ch) = chars[i];
            let column = code[..byte].chars().count() + 1;
            let single = match ch {
                '{' => Some(Tok::LBrace),
                '}' => Some(Tok::RBrace),
                ';' => Some(Tok::Semi),
                _ => None,
            };
            if let Some(tok) = single {
                out.push(Token {
                    tok,
                    line: line_no,
                    column,
                });
                i += 1;
            } else if ch.is_whitespace() {
                i += 1;
            } else {
                let start = byte;
                while i < chars.len() && !chars[i].1.is_whitespace() && !"{};".contains(chars[i].1)
                {
                    i += 1;
                }
                let end = chars.get(i).map_or(code.len(), |c| c.0);
                out.push(Token {
                    tok: Tok::Word(code[start..end].to_string()),
                    line: line_no,
                    column,
                });
            }
        }
    }
    out
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    last_line: usize,
}

impl Parser {
    fn err_at(&self, tok: Option<&Token>, message: impl Into<String>) -> Error {
        let (line, column) = match tok {
            Some(t) => (t.line, t.column),
            None => (self.last_line.max(1), 1),
        };
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn word(&mut self, what: &str) -> Result<(String, Token)> {
        match self.next() {
            Some(t) => match &t.tok {
                Tok::Word(w) => Ok((w.clone(), t.clone())),
                other => {
                    Err(self.err_at(Some(&t), format!("expected {what}, found {}", show(other))))
                }
            },
            None => Err(self.err_at(None, format!("expected {what}, found end of input"))),
        }
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        match self.next() {
            Some(t) if t.tok == want => Ok(()),
            Some(t) => Err(self.err_at(
                Some(&t),
                format!("expected {}, found {}", show(&want), show(&t.tok)),
            )),
            None => Err(self.err_at(
                None,
                format!("expected {}, found end of input", show(&want)),
            )),
        }
    }

    fn int(&mut self, what: &str) -> Result<usize> {
        let (w, t) = self.word(what)?;
        w.parse::<usize>()
            .map_err(|_| self.err_at(Some(&t), format!("malformed {what} `{w}`")))
    }

    fn axis(&mut self) -> Result<Axis> {
        let (w, t) = self.word("axis")?;
        match w.as_str() {
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            "z" => Ok(Axis::Z),
            _ => Err(self.err_at(Some(&t), format!("unknown axis `{w}`"))),
        }
    }

    fn angle(&mut self) -> Result<f64> {
        let (w, t) = self.word("angle")?;
        match w.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(self.err_at(Some(&t), format!("malformed angle `{w}`"))),
        }
    }

    fn sel_body(&mut self, kw: &Token) -> Result<Sel> {
        let from = self.int("level")?;
        let to = self.int("level")?;
        if from == to {
            return Err(self.err_at(Some(kw), format!("degenerate transition {from} {to}")));
        }
        if from == 0 || to == 0 {
            return Err(self.err_at(Some(kw), "levels are numbered from 1"));
        }
        let axis = self.axis()?;
        let angle_deg = self.angle()?;
        Ok(Sel {
            from,
            to,
            axis,
            angle_deg,
        })
    }

    fn block(&mut self) -> Result<Vec<Sel>> {
        self.expect(Tok::LBrace)?;
        let mut sels: Vec<Sel> = Vec::new();
        loop {
            let (w, kw) = self.word("`sel`")?;
            if w != "sel" {
                return Err(self.err_at(
                    Some(&kw),
                    format!("expected `sel` inside block, found `{w}`"),
                ));
            }
            let sel = self.sel_body(&kw)?;
            let pair = (sel.from.min(sel.to), sel.from.max(sel.to));
            if sels
                .iter()
                .any(|s| (s.from.min(s.to), s.from.max(s.to)) == pair)
            {
                return Err(self.err_at(
                    Some(&kw),
                    format!("duplicate transition {} {} in block", sel.from, sel.to),
                ));
            }
            sels.push(sel);
            match self.next() {
                Some(t) if t.tok == Tok::Semi => continue,
                Some(t) if t.tok == Tok::RBrace => break,
                Some(t) => {
                    return Err(self.err_at(
                        Some(&t),
                        format!("expected `;` or `}}`, found {}", show(&t.tok)),
                    ))
                }
                None => return Err(self.err_at(None, "unterminated block")),
            }
        }
        Ok(sels)
    }

    fn statement(&mut self) -> Result<(Statement, usize)> {
        let (w, kw) = self.word("statement")?;
        let stmt = match w.as_str() {
            "block" => Statement::Block(self.block()?),
            "sel" => Statement::Block(vec![self.sel_body(&kw)?]),
            "hard" => {
                let (t, tt) = self.word("`all` or spin index")?;
                let target = if t == "all" {
                    HardTarget::All
                } else {
                    match t.parse::<usize>() {
                        Ok(i) if i > 0 => HardTarget::Spin(i),
                        _ => {
                            return Err(
                                self.err_at(Some(&tt), format!("malformed spin index `{t}`"))
                            )
                        }
                    }
                };
                let axis = self.axis()?;
                let angle_deg = self.angle()?;
                Statement::Hard {
                    target,
                    axis,
                    angle_deg,
                }
            }
            "crush" => {
                let mode = match self.peek().map(|t| &t.tok) {
                    Some(Tok::Word(m)) if m == "ideal" => {
                        self.pos += 1;
                        CrushMode::AllOffDiagonal
                    }
                    Some(Tok::Word(m)) if m == "order" => {
                        self.pos += 1;
                        CrushMode::CoherenceOrder
                    }
                    _ => CrushMode::AllOffDiagonal,
                };
                Statement::Crush(mode)
            }
            "apply" => {
                let (name, nt) = self.word("unitary name")?;
                let r = match name.as_str() {
                    "walsh" => UnitaryRef::Walsh,
                    "mixing" => UnitaryRef::Mixing,
                    "oracle" => UnitaryRef::Oracle(self.word("formula")?.0),
                    _ => return Err(self.err_at(Some(&nt), format!("unknown unitary `{name}`"))),
                };
                Statement::Unitary(r)
            }
            _ => return Err(self.err_at(Some(&kw), format!("unknown keyword `{w}`"))),
        };
        Ok((stmt, kw.line))
    }
}

fn show(t: &Tok) -> String {
    match t {
        Tok::Word(w) => format!("`{w}`"),
        Tok::LBrace => "`{`".into(),
        Tok::RBrace => "`}`".into(),
        Tok::Semi => "`;`".into(),
    }
}

/// Parses program text, reporting the first syntax error with its line and column.
pub fn parse(text: &str) -> Result<PulseProgram> {
    let toks = lex(text);
    let last_line = toks.last().map_or(1, |t| t.line);
    let mut p = Parser {
        toks,
        pos: 0,
        last_line,
    };
    let mut program = PulseProgram::default();
    while p.peek().is_some() {
        let (stmt, line) = p.statement()?;
        program.statements.push(stmt);
        program.lines.push(line);
    }
    Ok(program)
}
