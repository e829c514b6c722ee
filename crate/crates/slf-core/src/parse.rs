//! Parser and printer for the three formula dialects.
//!
//! The concrete grammar accepts ASCII and UTF-8 operator spellings; all
//! abbreviations (⊥, ∧, →, F, G, universal quantifiers, E-paths) are
//! desugared here so the rest of the crate sees only the core connectives.
//!
//! Precedence, tightest first: prefix operators (quantifiers, bindings,
//! temporal unaries, negation) > `U` (right-associative) > `&` > `|` > `->`.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::formula::{normalize_qctl_path, normalize_sl_path, Ltl, Path, QctlState, SlState};
use crate::func::{self, FuncKind, Registry};
use crate::rat::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dialect {
    Sl,
    Qctl,
    Ltl,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ParsedFormula {
    Sl(SlState),
    Qctl(QctlState),
    Ltl(Ltl),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl core::fmt::Display for ParseError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    LAngles,   // << ⟪
    RAngles,   // >> ⟫
    LBrackets, // [[ ⟦
    RBrackets, // ]] ⟧
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Dot,
    Amp,
    PipeTok,
    Arrow,
    Bang,
    Assign, // :=
    KwA,
    KwE,
    KwX,
    KwF,
    KwG,
    KwU,
    KwExists,
    KwForall,
    KwDef,
    KwTrue,
    KwFalse,
    Ident(String),
    Lit(Rat),
    Eof,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut it = text.chars().peekable();

    macro_rules! push {
        ($t:expr) => {
            out.push(Spanned { tok: $t, line, col })
        };
    }

    while let Some(&c) = it.peek() {
        let (l0, c0) = (line, col);
        let advance = |it: &mut core::iter::Peekable<core::str::Chars>, line: &mut usize, col: &mut usize| {
            let ch = it.next().unwrap();
            if ch == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            ch
        };
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                advance(&mut it, &mut line, &mut col);
            }
            '#' => {
                // comment to end of line
                while let Some(&ch) = it.peek() {
                    advance(&mut it, &mut line, &mut col);
                    if ch == '\n' {
                        break;
                    }
                }
            }
            '<' => {
                advance(&mut it, &mut line, &mut col);
                if it.peek() == Some(&'<') {
                    advance(&mut it, &mut line, &mut col);
                    out.push(Spanned { tok: Tok::LAngles, line: l0, col: c0 });
                } else {
                    return Err(err(l0, c0, "expected `<<`"));
                }
            }
            '>' => {
                advance(&mut it, &mut line, &mut col);
                if it.peek() == Some(&'>') {
                    advance(&mut it, &mut line, &mut col);
                    out.push(Spanned { tok: Tok::RAngles, line: l0, col: c0 });
                } else {
                    return Err(err(l0, c0, "expected `>>`"));
                }
            }
            '⟪' => {
                advance(&mut it, &mut line, &mut col);
                out.push(Spanned { tok: Tok::LAngles, line: l0, col: c0 });
            }
            '⟫' => {
                advance(&mut it, &mut line, &mut col);
                out.push(Spanned { tok: Tok::RAngles, line: l0, col: c0 });
            }
            '⟦' => {
                advance(&mut it, &mut line, &mut col);
                out.push(Spanned { tok: Tok::LBrackets, line: l0, col: c0 });
            }
            '⟧' => {
                advance(&mut it, &mut line, &mut col);
                out.push(Spanned { tok: Tok::RBrackets, line: l0, col: c0 });
            }
            '[' => {
                advance(&mut it, &mut line, &mut col);
                if it.peek() == Some(&'[') {
                    advance(&mut it, &mut line, &mut col);
                    out.push(Spanned { tok: Tok::LBrackets, line: l0, col: c0 });
                } else {
                    out.push(Spanned { tok: Tok::LBracket, line: l0, col: c0 });
                }
            }
            ']' => {
                advance(&mut it, &mut line, &mut col);
                if it.peek() == Some(&']') {
                    advance(&mut it, &mut line, &mut col);
                    out.push(Spanned { tok: Tok::RBrackets, line: l0, col: c0 });
                } else {
                    out.push(Spanned { tok: Tok::RBracket, line: l0, col: c0 });
                }
            }
            '(' => {
                advance(&mut it, &mut line, &mut col);
                push!(Tok::LParen);
            }
            ')' => {
                advance(&mut it, &mut line, &mut col);
                push!(Tok::RParen);
            }
            ',' => {
                advance(&mut it, &mut line, &mut col);
                push!(Tok::Comma);
            }
            '.' => {
                advance(&mut it, &mut line, &mut col);
                push!(Tok::Dot);
            }
            '&' | '∧' => {
                advance(&mut it, &mut line, &mut col);
                out.push(Spanned { tok: Tok::Amp, line: l0, col: c0 });
            }
            '|' | '∨' => {
                advance(&mut it, &mut line, &mut col);
                out.push(Spanned { tok: Tok::PipeTok, line: l0, col: c0 });
            }
            '!' | '¬' | '~' => {
                advance(&mut it, &mut line, &mut col);
                out.push(Spanned { tok: Tok::Bang, line: l0, col: c0 });
            }
            '→' => {
                advance(&mut it, &mut line, &mut col);
                out.push(Spanned { tok: Tok::Arrow, line: l0, col: c0 });
            }
            '⊤' => {
                advance(&mut it, &mut line, &mut col);
                out.push(Spanned { tok: Tok::KwTrue, line: l0, col: c0 });
            }
            '⊥' => {
                advance(&mut it, &mut line, &mut col);
                out.push(Spanned { tok: Tok::KwFalse, line: l0, col: c0 });
            }
            '∃' => {
                advance(&mut it, &mut line, &mut col);
                out.push(Spanned { tok: Tok::KwExists, line: l0, col: c0 });
            }
            '∀' => {
                advance(&mut it, &mut line, &mut col);
                out.push(Spanned { tok: Tok::KwForall, line: l0, col: c0 });
            }
            '-' => {
                advance(&mut it, &mut line, &mut col);
                if it.peek() == Some(&'>') {
                    advance(&mut it, &mut line, &mut col);
                    out.push(Spanned { tok: Tok::Arrow, line: l0, col: c0 });
                } else {
                    return Err(err(l0, c0, "expected `->`"));
                }
            }
            ':' => {
                advance(&mut it, &mut line, &mut col);
                if it.peek() == Some(&'=') {
                    advance(&mut it, &mut line, &mut col);
                    out.push(Spanned { tok: Tok::Assign, line: l0, col: c0 });
                } else {
                    return Err(err(l0, c0, "expected `:=`"));
                }
            }
            d if d.is_ascii_digit() => {
                let mut num = String::new();
                while let Some(&ch) = it.peek() {
                    if ch.is_ascii_digit() {
                        num.push(advance(&mut it, &mut line, &mut col));
                    } else {
                        break;
                    }
                }
                let lit = if it.peek() == Some(&'/') {
                    advance(&mut it, &mut line, &mut col);
                    let mut den = String::new();
                    while let Some(&ch) = it.peek() {
                        if ch.is_ascii_digit() {
                            den.push(advance(&mut it, &mut line, &mut col));
                        } else {
                            break;
                        }
                    }
                    let n: u64 = num.parse().map_err(|_| err(l0, c0, "bad numerator"))?;
                    let d: u64 = den.parse().map_err(|_| err(l0, c0, "bad denominator"))?;
                    Rat::new(n, d).ok_or_else(|| err(l0, c0, "rational out of [0,1]"))?
                } else if it.peek() == Some(&'.') {
                    advance(&mut it, &mut line, &mut col);
                    let mut frac = String::new();
                    while let Some(&ch) = it.peek() {
                        if ch.is_ascii_digit() {
                            frac.push(advance(&mut it, &mut line, &mut col));
                        } else {
                            break;
                        }
                    }
                    let s = alloc::format!("{num}.{frac}");
                    Rat::from_decimal_str(&s).ok_or_else(|| err(l0, c0, "decimal out of [0,1]"))?
                } else {
                    let n: u64 = num.parse().map_err(|_| err(l0, c0, "bad literal"))?;
                    Rat::new(n, 1).ok_or_else(|| err(l0, c0, "integer literal out of [0,1]"))?
                };
                out.push(Spanned { tok: Tok::Lit(lit), line: l0, col: c0 });
            }
            a if a.is_alphabetic() || a == '_' => {
                let mut id = String::new();
                while let Some(&ch) = it.peek() {
                    if ch.is_alphanumeric() || ch == '_' || ch == '\'' {
                        id.push(advance(&mut it, &mut line, &mut col));
                    } else {
                        break;
                    }
                }
                let tok = match id.as_str() {
                    "A" => Tok::KwA,
                    "E" => Tok::KwE,
                    "X" => Tok::KwX,
                    "F" => Tok::KwF,
                    "G" => Tok::KwG,
                    "U" => Tok::KwU,
                    "exists" => Tok::KwExists,
                    "forall" => Tok::KwForall,
                    "def" => Tok::KwDef,
                    "true" | "top" => Tok::KwTrue,
                    "false" | "bot" => Tok::KwFalse,
                    _ => Tok::Ident(id),
                };
                out.push(Spanned { tok, line: l0, col: c0 });
            }
            other => {
                return Err(err(l0, c0, &alloc::format!("unexpected character `{other}`")));
            }
        }
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

fn err(line: usize, col: usize, msg: &str) -> ParseError {
    ParseError { line, col, message: msg.to_string() }
}

struct P<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    registry: &'a Registry,
}

impl<'a> P<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> (usize, usize) {
        (self.toks[self.pos].line, self.toks[self.pos].col)
    }

    fn fail<T>(&self, msg: &str) -> Result<T, ParseError> {
        let (l, c) = self.here();
        Err(err(l, c, msg))
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.next();
            Ok(())
        } else {
            self.fail(&alloc::format!("expected {what}"))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            _ => self.fail(&alloc::format!("expected {what}")),
        }
    }

    /// Resolves `name(args)` to a function spec via the registry; `wavg[λ]`
    /// is parsed structurally.
    fn func_call_spec(
        &mut self,
        name: &str,
        arity: usize,
    ) -> Result<alloc::sync::Arc<crate::func::FuncSpec>, ParseError> {
        match self.registry.instantiate(name, arity) {
            Some(Ok(spec)) => Ok(spec),
            Some(Err(e)) => self.fail(&alloc::format!("{e}")),
            None => self.fail(&alloc::format!("unknown function `{name}`")),
        }
    }

    fn parse_wavg_param(&mut self) -> Result<Rat, ParseError> {
        self.expect(Tok::LBracket, "`[`")?;
        let lambda = match self.peek().clone() {
            Tok::Lit(r) => {
                self.next();
                r
            }
            _ => return self.fail("expected rational weight"),
        };
        self.expect(Tok::RBracket, "`]`")?;
        Ok(lambda)
    }

    // ---- SL state formulas ----

    fn sl_state(&mut self) -> Result<SlState, ParseError> {
        self.sl_arrow()
    }

    fn sl_arrow(&mut self) -> Result<SlState, ParseError> {
        let lhs = self.sl_or()?;
        if *self.peek() == Tok::Arrow {
            self.next();
            let rhs = self.sl_arrow()?;
            Ok(SlState::Func(func::or2(), alloc::vec![SlState::neg(lhs), rhs]))
        } else {
            Ok(lhs)
        }
    }

    fn sl_or(&mut self) -> Result<SlState, ParseError> {
        let mut lhs = self.sl_and()?;
        while *self.peek() == Tok::PipeTok {
            self.next();
            let rhs = self.sl_and()?;
            lhs = SlState::Func(func::or2(), alloc::vec![lhs, rhs]);
        }
        Ok(lhs)
    }

    fn sl_and(&mut self) -> Result<SlState, ParseError> {
        let mut lhs = self.sl_unary()?;
        while *self.peek() == Tok::Amp {
            self.next();
            let rhs = self.sl_unary()?;
            lhs = SlState::Func(func::and2(), alloc::vec![lhs, rhs]);
        }
        Ok(lhs)
    }

    fn is_binding_ahead(&self) -> bool {
        *self.peek() == Tok::LParen
            && matches!(self.peek_at(1), Tok::Ident(_))
            && *self.peek_at(2) == Tok::Comma
            && matches!(self.peek_at(3), Tok::Ident(_))
            && *self.peek_at(4) == Tok::RParen
    }

    fn sl_unary(&mut self) -> Result<SlState, ParseError> {
        match self.peek().clone() {
            Tok::LAngles => {
                self.next();
                let x = self.ident("strategy variable")?;
                self.expect(Tok::RAngles, "`>>`")?;
                Ok(SlState::exists(x, self.sl_unary()?))
            }
            Tok::LBrackets => {
                self.next();
                let x = self.ident("strategy variable")?;
                self.expect(Tok::RBrackets, "`]]`")?;
                Ok(SlState::forall(x, self.sl_unary()?))
            }
            Tok::KwE if matches!(self.peek_at(1), Tok::Ident(_)) && *self.peek_at(2) == Tok::Dot => {
                self.next();
                let x = self.ident("strategy variable")?;
                self.expect(Tok::Dot, "`.`")?;
                Ok(SlState::exists(x, self.sl_unary()?))
            }
            Tok::KwA if matches!(self.peek_at(1), Tok::Ident(_)) && *self.peek_at(2) == Tok::Dot => {
                self.next();
                let x = self.ident("strategy variable")?;
                self.expect(Tok::Dot, "`.`")?;
                Ok(SlState::forall(x, self.sl_unary()?))
            }
            Tok::LParen if self.is_binding_ahead() => {
                self.next();
                let agent = self.ident("agent")?;
                self.expect(Tok::Comma, "`,`")?;
                let var = self.ident("strategy variable")?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(SlState::bind(agent, var, self.sl_unary()?))
            }
            Tok::Bang => {
                self.next();
                Ok(SlState::neg(self.sl_unary()?))
            }
            Tok::KwA => {
                self.next();
                let p = self.sl_path_unary()?;
                Ok(SlState::all(normalize_sl_path(p)))
            }
            Tok::KwE => {
                self.next();
                let p = self.sl_path_unary()?;
                // Eψ is sugar for ¬A¬ψ
                Ok(SlState::neg(SlState::all(normalize_sl_path(Path::Func(
                    func::neg1(),
                    alloc::vec![p],
                )))))
            }
            Tok::KwTrue => {
                self.next();
                Ok(SlState::Func(func::const_one(), Vec::new()))
            }
            Tok::KwFalse => {
                self.next();
                Ok(SlState::Func(func::const_rat(Rat::ZERO), Vec::new()))
            }
            Tok::Lit(r) => {
                self.next();
                Ok(SlState::Func(func::const_rat(r), Vec::new()))
            }
            Tok::Ident(name) => {
                self.next();
                if name == "wavg" && *self.peek() == Tok::LBracket {
                    let lambda = self.parse_wavg_param()?;
                    self.expect(Tok::LParen, "`(`")?;
                    let args = self.sl_args()?;
                    if args.len() != 2 {
                        return self.fail("wavg takes 2 arguments");
                    }
                    return Ok(SlState::Func(func::wavg(lambda), args));
                }
                if *self.peek() == Tok::LParen {
                    self.next();
                    let args = self.sl_args()?;
                    let spec = self.func_call_spec(&name, args.len())?;
                    Ok(SlState::Func(spec, args))
                } else {
                    Ok(SlState::Atom(name))
                }
            }
            Tok::LParen => {
                self.next();
                let inner = self.sl_state()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::KwX | Tok::KwF | Tok::KwG | Tok::KwU => {
                self.fail("temporal operator outside a path context (wrap it under `A` or `E`)")
            }
            _ => self.fail("expected a state formula"),
        }
    }

    fn sl_args(&mut self) -> Result<Vec<SlState>, ParseError> {
        let mut args = Vec::new();
        if *self.peek() == Tok::RParen {
            self.next();
            return Ok(args);
        }
        loop {
            args.push(self.sl_state()?);
            match self.next() {
                Tok::Comma => continue,
                Tok::RParen => break,
                _ => return self.fail("expected `,` or `)`"),
            }
        }
        Ok(args)
    }

    // ---- SL path formulas ----

    fn sl_path(&mut self) -> Result<Path<SlState>, ParseError> {
        self.sl_path_arrow()
    }

    fn sl_path_arrow(&mut self) -> Result<Path<SlState>, ParseError> {
        let lhs = self.sl_path_or()?;
        if *self.peek() == Tok::Arrow {
            self.next();
            let rhs = self.sl_path_arrow()?;
            Ok(Path::Func(
                func::or2(),
                alloc::vec![Path::Func(func::neg1(), alloc::vec![lhs]), rhs],
            ))
        } else {
            Ok(lhs)
        }
    }

    fn sl_path_or(&mut self) -> Result<Path<SlState>, ParseError> {
        let mut lhs = self.sl_path_and()?;
        while *self.peek() == Tok::PipeTok {
            self.next();
            let rhs = self.sl_path_and()?;
            lhs = Path::Func(func::or2(), alloc::vec![lhs, rhs]);
        }
        Ok(lhs)
    }

    fn sl_path_and(&mut self) -> Result<Path<SlState>, ParseError> {
        let mut lhs = self.sl_path_until()?;
        while *self.peek() == Tok::Amp {
            self.next();
            let rhs = self.sl_path_until()?;
            lhs = Path::Func(func::and2(), alloc::vec![lhs, rhs]);
        }
        Ok(lhs)
    }

    fn sl_path_until(&mut self) -> Result<Path<SlState>, ParseError> {
        let lhs = self.sl_path_unary()?;
        if *self.peek() == Tok::KwU {
            self.next();
            let rhs = self.sl_path_until()?;
            Ok(Path::Until(Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn sl_path_unary(&mut self) -> Result<Path<SlState>, ParseError> {
        match self.peek().clone() {
            Tok::KwX => {
                self.next();
                Ok(Path::Next(Box::new(self.sl_path_unary()?)))
            }
            Tok::KwF => {
                self.next();
                let body = self.sl_path_unary()?;
                Ok(Path::Until(
                    Box::new(Path::State(Box::new(SlState::Func(func::const_one(), Vec::new())))),
                    Box::new(body),
                ))
            }
            Tok::KwG => {
                self.next();
                let body = self.sl_path_unary()?;
                // G ψ = ¬(⊤ U ¬ψ)
                Ok(Path::Func(
                    func::neg1(),
                    alloc::vec![Path::Until(
                        Box::new(Path::State(Box::new(SlState::Func(func::const_one(), Vec::new())))),
                        Box::new(Path::Func(func::neg1(), alloc::vec![body])),
                    )],
                ))
            }
            Tok::Bang => {
                self.next();
                Ok(Path::Func(func::neg1(), alloc::vec![self.sl_path_unary()?]))
            }
            Tok::LParen if self.is_binding_ahead() => {
                let s = self.sl_unary()?;
                Ok(Path::State(Box::new(s)))
            }
            Tok::LParen => {
                self.next();
                let inner = self.sl_path()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::LAngles | Tok::LBrackets => {
                let s = self.sl_unary()?;
                Ok(Path::State(Box::new(s)))
            }
            Tok::KwA | Tok::KwE => {
                let s = self.sl_unary()?;
                Ok(Path::State(Box::new(s)))
            }
            Tok::KwTrue => {
                self.next();
                Ok(Path::State(Box::new(SlState::Func(func::const_one(), Vec::new()))))
            }
            Tok::KwFalse => {
                self.next();
                Ok(Path::State(Box::new(SlState::Func(func::const_rat(Rat::ZERO), Vec::new()))))
            }
            Tok::Lit(r) => {
                self.next();
                Ok(Path::State(Box::new(SlState::Func(func::const_rat(r), Vec::new()))))
            }
            Tok::Ident(name) => {
                self.next();
                if name == "wavg" && *self.peek() == Tok::LBracket {
                    let lambda = self.parse_wavg_param()?;
                    self.expect(Tok::LParen, "`(`")?;
                    let args = self.sl_path_args()?;
                    if args.len() != 2 {
                        return self.fail("wavg takes 2 arguments");
                    }
                    return Ok(Path::Func(func::wavg(lambda), args));
                }
                if *self.peek() == Tok::LParen {
                    self.next();
                    let args = self.sl_path_args()?;
                    let spec = self.func_call_spec(&name, args.len())?;
                    Ok(Path::Func(spec, args))
                } else {
                    Ok(Path::State(Box::new(SlState::Atom(name))))
                }
            }
            _ => self.fail("expected a path formula"),
        }
    }

    fn sl_path_args(&mut self) -> Result<Vec<Path<SlState>>, ParseError> {
        let mut args = Vec::new();
        if *self.peek() == Tok::RParen {
            self.next();
            return Ok(args);
        }
        loop {
            args.push(self.sl_path()?);
            match self.next() {
                Tok::Comma => continue,
                Tok::RParen => break,
                _ => return self.fail("expected `,` or `)`"),
            }
        }
        Ok(args)
    }

    // ---- QCTL ----

    fn qctl_state(&mut self) -> Result<QctlState, ParseError> {
        let lhs = self.qctl_or()?;
        if *self.peek() == Tok::Arrow {
            self.next();
            let rhs = self.qctl_state()?;
            Ok(QctlState::Func(func::or2(), alloc::vec![QctlState::neg(lhs), rhs]))
        } else {
            Ok(lhs)
        }
    }

    fn qctl_or(&mut self) -> Result<QctlState, ParseError> {
        let mut lhs = self.qctl_and()?;
        while *self.peek() == Tok::PipeTok {
            self.next();
            let rhs = self.qctl_and()?;
            lhs = QctlState::Func(func::or2(), alloc::vec![lhs, rhs]);
        }
        Ok(lhs)
    }

    fn qctl_and(&mut self) -> Result<QctlState, ParseError> {
        let mut lhs = self.qctl_unary()?;
        while *self.peek() == Tok::Amp {
            self.next();
            let rhs = self.qctl_unary()?;
            lhs = QctlState::Func(func::and2(), alloc::vec![lhs, rhs]);
        }
        Ok(lhs)
    }

    fn qctl_unary(&mut self) -> Result<QctlState, ParseError> {
        match self.peek().clone() {
            Tok::KwExists => {
                self.next();
                let p = self.ident("proposition")?;
                self.expect(Tok::Dot, "`.`")?;
                Ok(QctlState::exists_prop(p, self.qctl_unary()?))
            }
            Tok::KwForall => {
                self.next();
                let p = self.ident("proposition")?;
                self.expect(Tok::Dot, "`.`")?;
                Ok(QctlState::neg(QctlState::exists_prop(p, QctlState::neg(self.qctl_unary()?))))
            }
            Tok::Bang => {
                self.next();
                Ok(QctlState::neg(self.qctl_unary()?))
            }
            Tok::KwE => {
                self.next();
                let p = self.qctl_path_unary()?;
                Ok(QctlState::exists_path(normalize_qctl_path(p)))
            }
            Tok::KwA => {
                self.next();
                let p = self.qctl_path_unary()?;
                Ok(QctlState::neg(QctlState::exists_path(normalize_qctl_path(Path::Func(
                    func::neg1(),
                    alloc::vec![p],
                )))))
            }
            Tok::KwTrue => {
                self.next();
                Ok(QctlState::Func(func::const_one(), Vec::new()))
            }
            Tok::KwFalse => {
                self.next();
                Ok(QctlState::Func(func::const_rat(Rat::ZERO), Vec::new()))
            }
            Tok::Lit(r) => {
                self.next();
                Ok(QctlState::Func(func::const_rat(r), Vec::new()))
            }
            Tok::Ident(name) => {
                self.next();
                if name == "wavg" && *self.peek() == Tok::LBracket {
                    let lambda = self.parse_wavg_param()?;
                    self.expect(Tok::LParen, "`(`")?;
                    let args = self.qctl_args()?;
                    if args.len() != 2 {
                        return self.fail("wavg takes 2 arguments");
                    }
                    return Ok(QctlState::Func(func::wavg(lambda), args));
                }
                if *self.peek() == Tok::LParen {
                    self.next();
                    let args = self.qctl_args()?;
                    let spec = self.func_call_spec(&name, args.len())?;
                    Ok(QctlState::Func(spec, args))
                } else {
                    Ok(QctlState::Atom(name))
                }
            }
            Tok::LParen => {
                self.next();
                let inner = self.qctl_state()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::KwX | Tok::KwF | Tok::KwG | Tok::KwU => {
                self.fail("temporal operator outside a path context (wrap it under `A` or `E`)")
            }
            _ => self.fail("expected a state formula"),
        }
    }

    fn qctl_args(&mut self) -> Result<Vec<QctlState>, ParseError> {
        let mut args = Vec::new();
        if *self.peek() == Tok::RParen {
            self.next();
            return Ok(args);
        }
        loop {
            args.push(self.qctl_state()?);
            match self.next() {
                Tok::Comma => continue,
                Tok::RParen => break,
                _ => return self.fail("expected `,` or `)`"),
            }
        }
        Ok(args)
    }

    fn qctl_path(&mut self) -> Result<Path<QctlState>, ParseError> {
        let lhs = self.qctl_path_or()?;
        if *self.peek() == Tok::Arrow {
            self.next();
            let rhs = self.qctl_path()?;
            Ok(Path::Func(
                func::or2(),
                alloc::vec![Path::Func(func::neg1(), alloc::vec![lhs]), rhs],
            ))
        } else {
            Ok(lhs)
        }
    }

    fn qctl_path_or(&mut self) -> Result<Path<QctlState>, ParseError> {
        let mut lhs = self.qctl_path_and()?;
        while *self.peek() == Tok::PipeTok {
            self.next();
            let rhs = self.qctl_path_and()?;
            lhs = Path::Func(func::or2(), alloc::vec![lhs, rhs]);
        }
        Ok(lhs)
    }

    fn qctl_path_and(&mut self) -> Result<Path<QctlState>, ParseError> {
        let mut lhs = self.qctl_path_until()?;
        while *self.peek() == Tok::Amp {
            self.next();
            let rhs = self.qctl_path_until()?;
            lhs = Path::Func(func::and2(), alloc::vec![lhs, rhs]);
        }
        Ok(lhs)
    }

    fn qctl_path_until(&mut self) -> Result<Path<QctlState>, ParseError> {
        let lhs = self.qctl_path_unary()?;
        if *self.peek() == Tok::KwU {
            self.next();
            let rhs = self.qctl_path_until()?;
            Ok(Path::Until(Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn qctl_path_unary(&mut self) -> Result<Path<QctlState>, ParseError> {
        match self.peek().clone() {
            Tok::KwX => {
                self.next();
                Ok(Path::Next(Box::new(self.qctl_path_unary()?)))
            }
            Tok::KwF => {
                self.next();
                let body = self.qctl_path_unary()?;
                Ok(Path::Until(
                    Box::new(Path::State(Box::new(QctlState::Func(func::const_one(), Vec::new())))),
                    Box::new(body),
                ))
            }
            Tok::KwG => {
                self.next();
                let body = self.qctl_path_unary()?;
                Ok(Path::Func(
                    func::neg1(),
                    alloc::vec![Path::Until(
                        Box::new(Path::State(Box::new(QctlState::Func(func::const_one(), Vec::new())))),
                        Box::new(Path::Func(func::neg1(), alloc::vec![body])),
                    )],
                ))
            }
            Tok::Bang => {
                self.next();
                Ok(Path::Func(func::neg1(), alloc::vec![self.qctl_path_unary()?]))
            }
            Tok::LParen => {
                self.next();
                let inner = self.qctl_path()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::KwExists | Tok::KwForall | Tok::KwE | Tok::KwA => {
                let s = self.qctl_unary()?;
                Ok(Path::State(Box::new(s)))
            }
            Tok::KwTrue => {
                self.next();
                Ok(Path::State(Box::new(QctlState::Func(func::const_one(), Vec::new()))))
            }
            Tok::KwFalse => {
                self.next();
                Ok(Path::State(Box::new(QctlState::Func(func::const_rat(Rat::ZERO), Vec::new()))))
            }
            Tok::Lit(r) => {
                self.next();
                Ok(Path::State(Box::new(QctlState::Func(func::const_rat(r), Vec::new()))))
            }
            Tok::Ident(name) => {
                self.next();
                if name == "wavg" && *self.peek() == Tok::LBracket {
                    let lambda = self.parse_wavg_param()?;
                    self.expect(Tok::LParen, "`(`")?;
                    let args = self.qctl_path_args()?;
                    if args.len() != 2 {
                        return self.fail("wavg takes 2 arguments");
                    }
                    return Ok(Path::Func(func::wavg(lambda), args));
                }
                if *self.peek() == Tok::LParen {
                    self.next();
                    let args = self.qctl_path_args()?;
                    let spec = self.func_call_spec(&name, args.len())?;
                    Ok(Path::Func(spec, args))
                } else {
                    Ok(Path::State(Box::new(QctlState::Atom(name))))
                }
            }
            _ => self.fail("expected a path formula"),
        }
    }

    fn qctl_path_args(&mut self) -> Result<Vec<Path<QctlState>>, ParseError> {
        let mut args = Vec::new();
        if *self.peek() == Tok::RParen {
            self.next();
            return Ok(args);
        }
        loop {
            args.push(self.qctl_path()?);
            match self.next() {
                Tok::Comma => continue,
                Tok::RParen => break,
                _ => return self.fail("expected `,` or `)`"),
            }
        }
        Ok(args)
    }

    // ---- LTL ----

    fn ltl(&mut self) -> Result<Ltl, ParseError> {
        let lhs = self.ltl_or()?;
        if *self.peek() == Tok::Arrow {
            self.next();
            let rhs = self.ltl()?;
            Ok(Ltl::Func(func::or2(), alloc::vec![Ltl::neg(lhs), rhs]))
        } else {
            Ok(lhs)
        }
    }

    fn ltl_or(&mut self) -> Result<Ltl, ParseError> {
        let mut lhs = self.ltl_and()?;
        while *self.peek() == Tok::PipeTok {
            self.next();
            let rhs = self.ltl_and()?;
            lhs = Ltl::Func(func::or2(), alloc::vec![lhs, rhs]);
        }
        Ok(lhs)
    }

    fn ltl_and(&mut self) -> Result<Ltl, ParseError> {
        let mut lhs = self.ltl_until()?;
        while *self.peek() == Tok::Amp {
            self.next();
            let rhs = self.ltl_until()?;
            lhs = Ltl::Func(func::and2(), alloc::vec![lhs, rhs]);
        }
        Ok(lhs)
    }

    fn ltl_until(&mut self) -> Result<Ltl, ParseError> {
        let lhs = self.ltl_unary()?;
        if *self.peek() == Tok::KwU {
            self.next();
            let rhs = self.ltl_until()?;
            Ok(Ltl::until(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn ltl_unary(&mut self) -> Result<Ltl, ParseError> {
        match self.peek().clone() {
            Tok::KwX => {
                self.next();
                Ok(Ltl::next(self.ltl_unary()?))
            }
            Tok::KwF => {
                self.next();
                Ok(Ltl::finally(self.ltl_unary()?))
            }
            Tok::KwG => {
                self.next();
                Ok(Ltl::globally(self.ltl_unary()?))
            }
            Tok::Bang => {
                self.next();
                Ok(Ltl::neg(self.ltl_unary()?))
            }
            Tok::KwTrue => {
                self.next();
                Ok(Ltl::tt())
            }
            Tok::KwFalse => {
                self.next();
                Ok(Ltl::Func(func::const_rat(Rat::ZERO), Vec::new()))
            }
            Tok::Lit(r) => {
                self.next();
                Ok(Ltl::Func(func::const_rat(r), Vec::new()))
            }
            Tok::Ident(name) => {
                self.next();
                if name == "wavg" && *self.peek() == Tok::LBracket {
                    let lambda = self.parse_wavg_param()?;
                    self.expect(Tok::LParen, "`(`")?;
                    let args = self.ltl_args()?;
                    if args.len() != 2 {
                        return self.fail("wavg takes 2 arguments");
                    }
                    return Ok(Ltl::Func(func::wavg(lambda), args));
                }
                if *self.peek() == Tok::LParen {
                    self.next();
                    let args = self.ltl_args()?;
                    let spec = self.func_call_spec(&name, args.len())?;
                    Ok(Ltl::Func(spec, args))
                } else {
                    Ok(Ltl::Atom(name))
                }
            }
            Tok::LParen => {
                self.next();
                let inner = self.ltl()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => self.fail("expected an LTL formula"),
        }
    }

    fn ltl_args(&mut self) -> Result<Vec<Ltl>, ParseError> {
        let mut args = Vec::new();
        if *self.peek() == Tok::RParen {
            self.next();
            return Ok(args);
        }
        loop {
            args.push(self.ltl()?);
            match self.next() {
                Tok::Comma => continue,
                Tok::RParen => break,
                _ => return self.fail("expected `,` or `)`"),
            }
        }
        Ok(args)
    }
}

/// Parses a single formula in the given dialect.
pub fn parse_formula(
    text: &str,
    dialect: Dialect,
    registry: &Registry,
) -> Result<ParsedFormula, ParseError> {
    let toks = lex(text)?;
    let mut p = P { toks, pos: 0, registry };
    let out = match dialect {
        Dialect::Sl => ParsedFormula::Sl(p.sl_state()?),
        Dialect::Qctl => ParsedFormula::Qctl(p.qctl_state()?),
        Dialect::Ltl => ParsedFormula::Ltl(p.ltl()?),
    };
    if *p.peek() != Tok::Eof {
        return p.fail("trailing input after formula");
    }
    Ok(out)
}

pub fn parse_sl(text: &str, registry: &Registry) -> Result<SlState, ParseError> {
    match parse_formula(text, Dialect::Sl, registry)? {
        ParsedFormula::Sl(f) => Ok(f),
        _ => unreachable!(),
    }
}

pub fn parse_qctl(text: &str, registry: &Registry) -> Result<QctlState, ParseError> {
    match parse_formula(text, Dialect::Qctl, registry)? {
        ParsedFormula::Qctl(f) => Ok(f),
        _ => unreachable!(),
    }
}

pub fn parse_ltl(text: &str, registry: &Registry) -> Result<Ltl, ParseError> {
    match parse_formula(text, Dialect::Ltl, registry)? {
        ParsedFormula::Ltl(f) => Ok(f),
        _ => unreachable!(),
    }
}

/// Parses a definitions file: either one bare formula, or any number of
/// `def name := formula` blocks separated by newlines.
pub fn parse_defs(
    text: &str,
    dialect: Dialect,
    registry: &Registry,
) -> Result<Vec<(String, ParsedFormula)>, ParseError> {
    let toks = lex(text)?;
    let mut p = P { toks, pos: 0, registry };
    let mut out = Vec::new();
    if *p.peek() != Tok::KwDef {
        let f = match dialect {
            Dialect::Sl => ParsedFormula::Sl(p.sl_state()?),
            Dialect::Qctl => ParsedFormula::Qctl(p.qctl_state()?),
            Dialect::Ltl => ParsedFormula::Ltl(p.ltl()?),
        };
        if *p.peek() != Tok::Eof {
            return p.fail("trailing input after formula");
        }
        out.push((String::from("main"), f));
        return Ok(out);
    }
    while *p.peek() == Tok::KwDef {
        p.next();
        let name = p.ident("definition name")?;
        p.expect(Tok::Assign, "`:=`")?;
        let f = match dialect {
            Dialect::Sl => ParsedFormula::Sl(p.sl_state()?),
            Dialect::Qctl => ParsedFormula::Qctl(p.qctl_state()?),
            Dialect::Ltl => ParsedFormula::Ltl(p.ltl()?),
        };
        out.push((name, f));
    }
    if *p.peek() != Tok::Eof {
        return p.fail("expected `def` or end of input");
    }
    Ok(out)
}

// ---- printing (canonical core-grammar form; round-trips through the parser) ----

fn print_func_head(spec: &crate::func::FuncSpec) -> Option<String> {
    if let FuncKind::Const(c) = &spec.kind {
        Some(alloc::format!("{c}"))
    } else {
        None
    }
}

impl core::fmt::Display for SlState {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SlState::Atom(p) => write!(f, "{p}"),
            SlState::Exists(x, b) => write!(f, "<<{x}>> {b}"),
            SlState::Bind(a, x, b) => write!(f, "({a}, {x}) {b}"),
            SlState::All(p) => write!(f, "A {}", PathPrinter(p)),
            SlState::Func(spec, args) => print_call(f, spec, args),
        }
    }
}

impl core::fmt::Display for QctlState {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            QctlState::Atom(p) => write!(f, "{p}"),
            QctlState::ExistsProp(p, b) => write!(f, "exists {p} . {b}"),
            QctlState::ExistsPath(path) => write!(f, "E {}", PathPrinter(path)),
            QctlState::Func(spec, args) => print_call(f, spec, args),
        }
    }
}

impl core::fmt::Display for Ltl {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Ltl::Atom(p) => write!(f, "{p}"),
            Ltl::Next(q) => write!(f, "X {q}"),
            Ltl::Until(a, b) => write!(f, "({a} U {b})"),
            Ltl::Func(spec, args) => print_call(f, spec, args),
        }
    }
}

struct PathPrinter<'a, S>(&'a Path<S>);

impl<'a, S: core::fmt::Display> core::fmt::Display for PathPrinter<'a, S> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self.0 {
            Path::State(s) => write!(f, "{s}"),
            Path::Next(q) => write!(f, "X {}", PathPrinter(q)),
            Path::Until(a, b) => write!(f, "({} U {})", PathPrinter(a), PathPrinter(b)),
            Path::Func(spec, args) => {
                if let Some(head) = print_func_head(spec) {
                    debug_assert!(args.is_empty());
                    return write!(f, "{head}");
                }
                write!(f, "{}(", spec.name)?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}", PathPrinter(a))?;
                }
                write!(f, ")")
            }
        }
    }
}

fn print_call<T: core::fmt::Display>(
    f: &mut core::fmt::Formatter<'_>,
    spec: &crate::func::FuncSpec,
    args: &[T],
) -> core::fmt::Result {
    if let Some(head) = print_func_head(spec) {
        debug_assert!(args.is_empty());
        return write!(f, "{head}");
    }
    write!(f, "{}(", spec.name)?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{a}")?;
    }
    write!(f, ")")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Path;

    fn reg() -> Registry {
        Registry::builtin()
    }

    #[test]
    fn parse_sl_example() {
        // "<<x>> (a,x) A (F p)" from the grammar
        let f = parse_sl("<<x>> (a,x) A (F p)", &reg()).unwrap();
        let expect = SlState::exists(
            "x",
            SlState::bind(
                "a",
                "x",
                SlState::all(Path::Until(
                    Box::new(Path::State(Box::new(SlState::Func(func::const_one(), Vec::new())))),
                    Box::new(Path::State(Box::new(SlState::atom("p")))),
                )),
            ),
        );
        assert_eq!(f, expect);
    }

    #[test]
    fn parse_func_example() {
        let f = parse_sl("max(p, neg(q))", &reg()).unwrap();
        let expect = SlState::Func(
            func::or2(),
            alloc::vec![SlState::atom("p"), SlState::neg(SlState::atom("q"))],
        );
        assert_eq!(f, expect);
    }

    #[test]
    fn parse_drone_until() {
        let f = parse_sl("A ((dist) U safe)", &reg()).unwrap();
        let expect = SlState::all(Path::Until(
            Box::new(Path::State(Box::new(SlState::atom("dist")))),
            Box::new(Path::State(Box::new(SlState::atom("safe")))),
        ));
        assert_eq!(f, expect);
    }

    #[test]
    fn universal_quantifier_desugars() {
        let f = parse_sl("[[y]] p", &reg()).unwrap();
        assert_eq!(f, SlState::forall("y", SlState::atom("p")));
        let g = parse_sl("E y . p", &reg()).unwrap();
        assert_eq!(g, SlState::exists("y", SlState::atom("p")));
    }

    #[test]
    fn qctl_quantifiers() {
        let f = parse_qctl("exists p . E X p", &reg()).unwrap();
        let expect = QctlState::exists_prop(
            "p",
            QctlState::exists_path(Path::Next(Box::new(Path::State(Box::new(QctlState::atom(
                "p",
            )))))),
        );
        assert_eq!(f, expect);
    }

    #[test]
    fn errors_carry_position() {
        let e = parse_sl("max(p", &reg()).unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse_sl("nosuch(p)", &reg()).unwrap_err();
        assert!(e.message.contains("unknown function"));
        let e = parse_sl("min(p)", &reg()).err();
        assert!(e.is_none(), "min is variadic");
        let e = parse_sl("neg(p, q)", &reg()).unwrap_err();
        assert!(e.message.contains("expects"));
    }

    #[test]
    fn print_parse_round_trip() {
        for text in [
            "<<x>> (a, x) A (F p)",
            "max(p, neg(q))",
            "A ((dist) U safe)",
            "[[y]] <<x>> (a, x) (b, y) A X min(p, q)",
            "wavg[2/3](p, q)",
            "A (G (req -> wavg[2/3](grant, X grant)))",
            "1/2",
        ] {
            let f = parse_sl(text, &reg()).unwrap();
            let printed = alloc::format!("{f}");
            let again = parse_sl(&printed, &reg()).unwrap();
            assert_eq!(f, again, "round trip failed for `{text}` -> `{printed}`");
        }
    }

    #[test]
    fn defs_blocks() {
        let defs = parse_defs(
            "def one := p\ndef two := max(p, q)",
            Dialect::Sl,
            &reg(),
        )
        .unwrap();
        assert_eq!(defs.len(), 2);
        assert_eq!(defs[0].0, "one");
    }
}
