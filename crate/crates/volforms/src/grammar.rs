//! Textual and JSON grammars for every value the tool reads or prints.
//!
//! # Light expression grammar
//!
//! Atoms:
//! - rationals `3`, `3/2` (the slash must be adjacent),
//! - `i`, the imaginary unit (trig ring only),
//! - `x3`, `x3^2` — polynomial variables, 1-based axes; an exponent caret
//!   must be adjacent to the variable (`x1^2`), otherwise `^` is the
//!   wedge,
//! - `dx3`, `dx[1,3]` — basis 1-forms and higher basis forms,
//! - `e2` — basis vector fields; `e[0,0,1]` — trig modes (the scalar
//!   function e^(2πi k·x), trig ring only),
//! - `k-form{ <coeff> dx[i,j,..] ; ... }` / `k-vec{ <coeff> e[i,j,..] ; ... }`
//!   brace literals (the *last* ` dx[` / ` e[` of each item starts the
//!   basis tuple, so trig-mode coefficients are unambiguous).
//!
//! Operators: juxtaposition multiplies a scalar into anything; `^` is the
//! wedge product and binds tighter than `+`/`-`; a wedge with a scalar
//! operand is ordinary multiplication.  Function calls take arguments
//! separated by `,` or `;`: `bracket`, `d`, `iota`, `flat`, `sharp`,
//! `xfield`, `div`, `delta`, `lich` (alias `cocycle`), `cycle`,
//! `decompose`, `factor(diffop{...})`.  A trailing `@ poly|trig n=N`
//! selects the coefficient ring and dimension, overriding the caller's
//! default context.
//!
//! Printed values re-parse to the same value; degree-0 forms normalize to
//! scalars and the zero tensor prints as `0`.
//!
//! # JSON mirrors
//!
//! Forms/multivectors: `{format_version, kind, ring, dim, degree,
//! terms:[{indices, coeff}]}` with 1-based `indices` and coefficient
//! strings in the scalar grammar.  Differential operators:
//! `{format_version, n, k, width, terms:[{I, sigma, value}]}` with
//! 1-based `I` and polynomial strings in `value`.

use crate::cartan::{
    contract, delta, divergence, flat, hamiltonian_field, leibniz_bracket, lie_bracket, sharp,
    Form, MultiVec,
};
use crate::decompose::{
    commutator_decompose, square_decompose, BracketWitness, SquareWitness,
};
use crate::ophom::{factor_through_d, DiffOp};
use crate::scalar::{
    gauss, gauss_int, gauss_to_string, rat_int, Coefficient, GaussRat, PolyCoeff, Rat, TrigCoeff,
};
use crate::torus::{cycle_cocycle, integrate_form_over_cycle, lichnerowicz, CycleSpec};
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Version tag carried by every textual report header and JSON document.
pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("semantic error in {op}: {msg}")]
    Semantic { op: String, msg: String },
}

fn perr(pos: usize, msg: impl Into<String>) -> GrammarError {
    GrammarError::Parse {
        pos,
        msg: msg.into(),
    }
}

fn serr(op: impl Into<String>, msg: impl Into<String>) -> GrammarError {
    GrammarError::Semantic {
        op: op.into(),
        msg: msg.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ring {
    Poly,
    Trig,
}

impl Ring {
    pub fn name(self) -> &'static str {
        match self {
            Ring::Poly => "poly",
            Ring::Trig => "trig",
        }
    }

    pub fn from_name(s: &str) -> Option<Ring> {
        match s {
            "poly" => Some(Ring::Poly),
            "trig" => Some(Ring::Trig),
            _ => None,
        }
    }
}

/// Evaluation context: coefficient ring and ambient dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Context {
    pub ring: Ring,
    pub n: usize,
}

/// Largest accepted ambient dimension (tuples are u8-indexed and the
/// combinatorics beyond this are out of scope anyway).
pub const MAX_DIM: usize = 32;

// ---------------------------------------------------------------------------
// Ring-specific grammar hooks
// ---------------------------------------------------------------------------

/// Grammar capabilities of a coefficient ring: which atoms it accepts,
/// how its scalars juxtapose, and which ring-specific functions exist.
/// `None` from a hook means "not available in this ring".
pub trait ScalarGrammar: Coefficient {
    fn ring() -> Ring;
    fn imaginary(n: usize) -> Option<Self>;
    fn var_pow(n: usize, axis0: usize, exp: u16) -> Option<Self>;
    fn trig_mode(n: usize, freq: Vec<i32>) -> Option<Self>;
    /// True if the canonical text needs parentheses before a basis symbol.
    fn needs_parens(&self) -> bool;
    fn lich(
        sigma: &Form<Self>,
        x: &MultiVec<Self>,
        y: &MultiVec<Self>,
    ) -> Option<Result<GaussRat, String>>;
    fn cycle_integral(a0: u8, b0: u8, gamma: &Form<Self>) -> Option<Result<GaussRat, String>>;
    fn cycle_pairing(
        a0: u8,
        b0: u8,
        x: &MultiVec<Self>,
        y: &MultiVec<Self>,
    ) -> Option<Result<GaussRat, String>>;
    fn decompose_vec(v: &MultiVec<Self>) -> Option<Result<serde_json::Value, String>>;
    fn decompose_form(f: &Form<Self>) -> Option<Result<serde_json::Value, String>>;
    fn factor_operator(json: &str) -> Option<Result<serde_json::Value, String>>;
}

impl ScalarGrammar for PolyCoeff {
    fn ring() -> Ring {
        Ring::Poly
    }

    fn imaginary(_n: usize) -> Option<Self> {
        None
    }

    fn var_pow(n: usize, axis0: usize, exp: u16) -> Option<Self> {
        let mut e = vec![0u16; n];
        e[axis0] = exp;
        Some(PolyCoeff::monomial(n, e, rat_int(1)))
    }

    fn trig_mode(_n: usize, _freq: Vec<i32>) -> Option<Self> {
        None
    }

    fn needs_parens(&self) -> bool {
        self.term_count() > 1
    }

    fn lich(
        _sigma: &Form<Self>,
        _x: &MultiVec<Self>,
        _y: &MultiVec<Self>,
    ) -> Option<Result<GaussRat, String>> {
        None
    }

    fn cycle_integral(_a0: u8, _b0: u8, _g: &Form<Self>) -> Option<Result<GaussRat, String>> {
        None
    }

    fn cycle_pairing(
        _a0: u8,
        _b0: u8,
        _x: &MultiVec<Self>,
        _y: &MultiVec<Self>,
    ) -> Option<Result<GaussRat, String>> {
        None
    }

    fn decompose_vec(v: &MultiVec<Self>) -> Option<Result<serde_json::Value, String>> {
        Some(
            commutator_decompose(v)
                .map(|w| bracket_witness_json(&w))
                .map_err(|e| e.to_string()),
        )
    }

    fn decompose_form(f: &Form<Self>) -> Option<Result<serde_json::Value, String>> {
        Some(
            square_decompose(f)
                .map(|w| square_witness_json(&w))
                .map_err(|e| e.to_string()),
        )
    }

    fn factor_operator(json: &str) -> Option<Result<serde_json::Value, String>> {
        Some((|| {
            let dj: DiffOpJson = serde_json::from_str(json).map_err(|e| e.to_string())?;
            let op = diffop_from_json(&dj).map_err(|e| e.to_string())?;
            let (q, stages) = factor_through_d(&op).map_err(|e| e.to_string())?;
            let verified = stages.iter().all(|s| s.property1 && s.property2);
            Ok(serde_json::json!({
                "format_version": FORMAT_VERSION,
                "kind": "factorization",
                "q": diffop_to_json(&q),
                "stages": stages
                    .iter()
                    .map(|s| serde_json::json!({
                        "stage": s.stage,
                        "property1": s.property1,
                        "property2": s.property2,
                    }))
                    .collect::<Vec<_>>(),
                "verified": verified,
            }))
        })())
    }
}

impl ScalarGrammar for TrigCoeff {
    fn ring() -> Ring {
        Ring::Trig
    }

    fn imaginary(n: usize) -> Option<Self> {
        Some(TrigCoeff::constant(n, gauss(rat_int(0), rat_int(1))))
    }

    fn var_pow(_n: usize, _axis0: usize, _exp: u16) -> Option<Self> {
        None
    }

    fn trig_mode(n: usize, freq: Vec<i32>) -> Option<Self> {
        Some(TrigCoeff::mode(n, freq, gauss_int(1)))
    }

    fn needs_parens(&self) -> bool {
        // a lone constant mode with both real and imaginary part already
        // prints parenthesized, so only genuine sums need wrapping
        self.mode_count() > 1
    }

    fn lich(
        sigma: &Form<Self>,
        x: &MultiVec<Self>,
        y: &MultiVec<Self>,
    ) -> Option<Result<GaussRat, String>> {
        Some(lichnerowicz(sigma, x, y).map_err(|e| e.to_string()))
    }

    fn cycle_integral(a0: u8, b0: u8, gamma: &Form<Self>) -> Option<Result<GaussRat, String>> {
        Some(
            CycleSpec::new(gamma.dim(), a0, b0)
                .and_then(|c| integrate_form_over_cycle(&c, gamma))
                .map_err(|e| e.to_string()),
        )
    }

    fn cycle_pairing(
        a0: u8,
        b0: u8,
        x: &MultiVec<Self>,
        y: &MultiVec<Self>,
    ) -> Option<Result<GaussRat, String>> {
        Some(
            CycleSpec::new(x.dim(), a0, b0)
                .and_then(|c| cycle_cocycle(&c, x, y))
                .map_err(|e| e.to_string()),
        )
    }

    fn decompose_vec(_v: &MultiVec<Self>) -> Option<Result<serde_json::Value, String>> {
        None
    }

    fn decompose_form(_f: &Form<Self>) -> Option<Result<serde_json::Value, String>> {
        None
    }

    fn factor_operator(_json: &str) -> Option<Result<serde_json::Value, String>> {
        None
    }
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rat),
    Imag,
    Var { axis1: usize, exp: u16 },
    DxTuple(Vec<i64>),
    EIdx(usize),
    EMode(Vec<i64>),
    Ident(String),
    Brace {
        degree: usize,
        is_vec: bool,
        body: String,
        body_pos: usize,
    },
    DiffOpLit(String),
    LParen,
    RParen,
    Plus,
    Minus,
    Caret,
    Comma,
    Semi,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ') | Some(b'\t') | Some(b'\n') | Some(b'\r')) {
            self.pos += 1;
        }
    }

    fn read_digits(&mut self) -> &'a str {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap()
    }

    fn read_int<T: std::str::FromStr>(&mut self, what: &str) -> Result<T, GrammarError> {
        let start = self.pos;
        let digits = self.read_digits();
        digits
            .parse::<T>()
            .map_err(|_| perr(start, format!("bad {what} '{digits}'")))
    }

    /// Comma-separated signed integer list after an opening '['.
    fn read_int_list(&mut self) -> Result<Vec<i64>, GrammarError> {
        self.pos += 1; // consume '['
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            let neg = self.peek() == Some(b'-');
            if neg {
                self.pos += 1;
            }
            if !matches!(self.peek(), Some(b'0'..=b'9')) {
                return Err(perr(self.pos, "expected an integer in index list"));
            }
            let v: i64 = self.read_int("integer")?;
            out.push(if neg { -v } else { v });
            self.skip_ws();
            match self.peek() {
                Some(b',') => {
                    self.pos += 1;
                }
                Some(b']') => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(perr(self.pos, "expected ',' or ']' in index list")),
            }
        }
    }

    /// Span of a balanced `{...}` group starting at `self.pos` (which must
    /// point at '{'), honoring JSON string literals.
    fn read_brace_group(&mut self) -> Result<(usize, usize), GrammarError> {
        let open = self.pos;
        let mut depth = 0usize;
        let mut in_str = false;
        while let Some(b) = self.peek() {
            if in_str {
                if b == b'\\' {
                    self.pos += 2;
                    continue;
                }
                if b == b'"' {
                    in_str = false;
                }
            } else {
                match b {
                    b'"' => in_str = true,
                    b'{' => depth += 1,
                    b'}' => {
                        depth -= 1;
                        if depth == 0 {
                            self.pos += 1;
                            return Ok((open, self.pos - 1));
                        }
                    }
                    _ => {}
                }
            }
            self.pos += 1;
        }
        Err(perr(open, "unterminated '{'"))
    }

    fn rest_starts_with(&self, s: &str) -> bool {
        self.src[self.pos..].starts_with(s.as_bytes())
    }

    fn lex(mut self) -> Result<Vec<(Tok, usize)>, GrammarError> {
        let mut toks = Vec::new();
        loop {
            self.skip_ws();
            let start = self.pos;
            let Some(b) = self.peek() else { break };
            match b {
                b'0'..=b'9' => {
                    let num: i64 = self.read_int("number")?;
                    if self.rest_starts_with("-form{") || self.rest_starts_with("-vec{") {
                        let is_vec = self.rest_starts_with("-vec{");
                        self.pos += if is_vec { 4 } else { 5 }; // skip to '{'
                        let (open, close) = self.read_brace_group()?;
                        let body =
                            std::str::from_utf8(&self.src[open + 1..close]).unwrap().to_string();
                        toks.push((
                            Tok::Brace {
                                degree: num as usize,
                                is_vec,
                                body,
                                body_pos: open + 1,
                            },
                            start,
                        ));
                    } else if self.peek() == Some(b'/')
                        && matches!(self.src.get(self.pos + 1), Some(b'0'..=b'9'))
                    {
                        self.pos += 1;
                        let den: i64 = self.read_int("denominator")?;
                        if den == 0 {
                            return Err(perr(start, "zero denominator"));
                        }
                        toks.push((Tok::Num(crate::scalar::rat(num, den)), start));
                    } else {
                        toks.push((Tok::Num(rat_int(num)), start));
                    }
                }
                b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                    let id_start = self.pos;
                    while matches!(
                        self.peek(),
                        Some(b'a'..=b'z') | Some(b'A'..=b'Z') | Some(b'0'..=b'9') | Some(b'_')
                    ) {
                        self.pos += 1;
                    }
                    let ident =
                        std::str::from_utf8(&self.src[id_start..self.pos]).unwrap().to_string();
                    let tok = if ident == "i" {
                        Tok::Imag
                    } else if let Some(rest) = ident.strip_prefix("dx") {
                        if !rest.is_empty() && rest.bytes().all(|c| c.is_ascii_digit()) {
                            let k: i64 = rest
                                .parse()
                                .map_err(|_| perr(start, "bad form index"))?;
                            Tok::DxTuple(vec![k])
                        } else if rest.is_empty() && self.peek() == Some(b'[') {
                            Tok::DxTuple(self.read_int_list()?)
                        } else {
                            Tok::Ident(ident)
                        }
                    } else if let Some(rest) = ident.strip_prefix('x') {
                        if !rest.is_empty() && rest.bytes().all(|c| c.is_ascii_digit()) {
                            let axis1: usize =
                                rest.parse().map_err(|_| perr(start, "bad variable index"))?;
                            // an adjacent '^<digits>' is an exponent, not a wedge
                            let exp: u16 = if self.peek() == Some(b'^')
                                && matches!(self.src.get(self.pos + 1), Some(b'0'..=b'9'))
                            {
                                self.pos += 1;
                                self.read_int("exponent")?
                            } else {
                                1
                            };
                            Tok::Var { axis1, exp }
                        } else {
                            Tok::Ident(ident)
                        }
                    } else if let Some(rest) = ident.strip_prefix('e') {
                        if !rest.is_empty() && rest.bytes().all(|c| c.is_ascii_digit()) {
                            let k: usize =
                                rest.parse().map_err(|_| perr(start, "bad vector index"))?;
                            Tok::EIdx(k)
                        } else if rest.is_empty() && self.peek() == Some(b'[') {
                            Tok::EMode(self.read_int_list()?)
                        } else {
                            Tok::Ident(ident)
                        }
                    } else if ident == "diffop" && self.peek() == Some(b'{') {
                        let (open, close) = self.read_brace_group()?;
                        let json =
                            std::str::from_utf8(&self.src[open..=close]).unwrap().to_string();
                        Tok::DiffOpLit(json)
                    } else {
                        Tok::Ident(ident)
                    };
                    toks.push((tok, start));
                }
                b'(' => {
                    self.pos += 1;
                    toks.push((Tok::LParen, start));
                }
                b')' => {
                    self.pos += 1;
                    toks.push((Tok::RParen, start));
                }
                b'+' => {
                    self.pos += 1;
                    toks.push((Tok::Plus, start));
                }
                b'-' => {
                    self.pos += 1;
                    toks.push((Tok::Minus, start));
                }
                b'^' => {
                    self.pos += 1;
                    toks.push((Tok::Caret, start));
                }
                b',' => {
                    self.pos += 1;
                    toks.push((Tok::Comma, start));
                }
                b';' => {
                    self.pos += 1;
                    toks.push((Tok::Semi, start));
                }
                _ => {
                    return Err(perr(
                        start,
                        format!("unexpected character '{}'", self.src[start] as char),
                    ))
                }
            }
        }
        Ok(toks)
    }
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
struct BraceItem {
    coeff_src: String,
    coeff_pos: usize,
    indices: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq)]
enum Ast {
    Num(Rat),
    Imag,
    Var { axis1: usize, exp: u16 },
    FormBasis(Vec<i64>),
    VecBasis(Vec<i64>),
    Mode(Vec<i64>),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Wedge(Box<Ast>, Box<Ast>),
    Call {
        name: String,
        pos: usize,
        args: Vec<Ast>,
    },
    Brace {
        degree: usize,
        is_vec: bool,
        items: Vec<BraceItem>,
        pos: usize,
    },
    DiffOpLit {
        json: String,
    },
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    i: usize,
    end: usize,
}

impl Parser {
    fn parse(src: &str) -> Result<Ast, GrammarError> {
        let toks = Lexer::new(src).lex()?;
        if toks.is_empty() {
            return Err(perr(0, "empty expression"));
        }
        let mut p = Parser {
            toks,
            i: 0,
            end: src.len(),
        };
        let ast = p.expr()?;
        if p.i < p.toks.len() {
            return Err(perr(p.toks[p.i].1, "unexpected trailing input"));
        }
        Ok(ast)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Ast, GrammarError> {
        let neg = self.eat(&Tok::Minus);
        let mut node = self.term()?;
        if neg {
            node = Ast::Neg(Box::new(node));
        }
        loop {
            if self.eat(&Tok::Plus) {
                let rhs = self.term()?;
                node = Ast::Add(Box::new(node), Box::new(rhs));
            } else if self.eat(&Tok::Minus) {
                let rhs = self.term()?;
                node = Ast::Sub(Box::new(node), Box::new(rhs));
            } else {
                break;
            }
        }
        Ok(node)
    }

    fn starts_primary(&self) -> bool {
        matches!(
            self.peek(),
            Some(
                Tok::Num(_)
                    | Tok::Imag
                    | Tok::Var { .. }
                    | Tok::DxTuple(_)
                    | Tok::EIdx(_)
                    | Tok::EMode(_)
                    | Tok::Ident(_)
                    | Tok::Brace { .. }
                    | Tok::DiffOpLit(_)
                    | Tok::LParen
            )
        )
    }

    fn term(&mut self) -> Result<Ast, GrammarError> {
        let mut node = self.wedge()?;
        while self.starts_primary() {
            let rhs = self.wedge()?;
            node = Ast::Mul(Box::new(node), Box::new(rhs));
        }
        Ok(node)
    }

    fn wedge(&mut self) -> Result<Ast, GrammarError> {
        let mut node = self.primary()?;
        while self.eat(&Tok::Caret) {
            let rhs = self.primary()?;
            node = Ast::Wedge(Box::new(node), Box::new(rhs));
        }
        Ok(node)
    }

    fn primary(&mut self) -> Result<Ast, GrammarError> {
        let pos = self.pos();
        let Some(tok) = self.peek().cloned() else {
            return Err(perr(pos, "expected a value"));
        };
        self.i += 1;
        match tok {
            Tok::Num(r) => Ok(Ast::Num(r)),
            Tok::Imag => Ok(Ast::Imag),
            Tok::Var { axis1, exp } => Ok(Ast::Var { axis1, exp }),
            Tok::DxTuple(list) => Ok(Ast::FormBasis(list)),
            Tok::EIdx(k) => Ok(Ast::VecBasis(vec![k as i64])),
            Tok::EMode(list) => Ok(Ast::Mode(list)),
            Tok::DiffOpLit(json) => Ok(Ast::DiffOpLit { json }),
            Tok::LParen => {
                let inner = self.expr()?;
                if !self.eat(&Tok::RParen) {
                    return Err(perr(self.pos(), "expected ')'"));
                }
                Ok(inner)
            }
            Tok::Ident(name) => {
                if !self.eat(&Tok::LParen) {
                    return Err(perr(pos, format!("unknown symbol '{name}'")));
                }
                let mut args = vec![self.expr()?];
                while self.eat(&Tok::Comma) || self.eat(&Tok::Semi) {
                    args.push(self.expr()?);
                }
                if !self.eat(&Tok::RParen) {
                    return Err(perr(self.pos(), "expected ')' after arguments"));
                }
                Ok(Ast::Call { name, pos, args })
            }
            Tok::Brace {
                degree,
                is_vec,
                body,
                body_pos,
            } => {
                if degree == 0 {
                    return Err(perr(pos, "degree-0 literals are plain scalar expressions"));
                }
                let items = parse_brace_items(&body, body_pos, degree, is_vec)?;
                Ok(Ast::Brace {
                    degree,
                    is_vec,
                    items,
                    pos,
                })
            }
            Tok::RParen | Tok::Plus | Tok::Minus | Tok::Caret | Tok::Comma | Tok::Semi => {
                Err(perr(pos, "expected a value"))
            }
        }
    }
}

/// Split a brace-literal body into (coefficient source, basis tuple)
/// items.  The *last* ` dx[` (forms) or ` e[` (vectors) in each
/// ';'-separated item starts the basis tuple, so trig-mode factors in the
/// coefficient never collide with it.
fn parse_brace_items(
    body: &str,
    body_pos: usize,
    degree: usize,
    is_vec: bool,
) -> Result<Vec<BraceItem>, GrammarError> {
    let marker = if is_vec { " e[" } else { " dx[" };
    let mut items = Vec::new();
    let mut offset = 0usize;
    for raw in body.split(';') {
        let item_pos = body_pos + offset;
        offset += raw.len() + 1;
        if raw.trim().is_empty() {
            continue;
        }
        let padded = format!(" {raw}");
        let Some(mark) = padded.rfind(marker) else {
            return Err(perr(
                item_pos,
                format!("missing basis tuple '{}[..]'", marker.trim_start()),
            ));
        };
        let coeff_src = padded[..mark].trim().to_string();
        let list_src = padded[mark + marker.len() - 1..].trim();
        if !list_src.starts_with('[') || !list_src.ends_with(']') {
            return Err(perr(item_pos, "malformed basis tuple"));
        }
        let mut indices = Vec::new();
        for piece in list_src[1..list_src.len() - 1].split(',') {
            let v: i64 = piece
                .trim()
                .parse()
                .map_err(|_| perr(item_pos, format!("bad basis index '{}'", piece.trim())))?;
            indices.push(v);
        }
        if indices.len() != degree {
            return Err(perr(
                item_pos,
                format!(
                    "basis tuple has {} indices but the literal declares degree {}",
                    indices.len(),
                    degree
                ),
            ));
        }
        items.push(BraceItem {
            coeff_src: if coeff_src.is_empty() {
                "1".to_string()
            } else {
                coeff_src
            },
            coeff_pos: item_pos,
            indices,
        });
    }
    if items.is_empty() {
        return Err(perr(body_pos, "empty literal"));
    }
    Ok(items)
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

enum Val<C: Coefficient> {
    S(C),
    F(Form<C>),
    V(MultiVec<C>),
    G(GaussRat),
    J(serde_json::Value),
}

impl<C: Coefficient> Val<C> {
    fn shape(&self) -> &'static str {
        match self {
            Val::S(_) => "scalar",
            Val::F(f) => {
                if f.degree() == 0 {
                    "0-form"
                } else {
                    "form"
                }
            }
            Val::V(_) => "multivector",
            Val::G(_) => "number",
            Val::J(_) => "report",
        }
    }
}

fn check_tuple(list: &[i64], n: usize, what: &str) -> Result<Vec<u8>, GrammarError> {
    let mut out = Vec::with_capacity(list.len());
    for &v in list {
        if v < 1 || v as usize > n {
            return Err(serr(
                what,
                format!("index {v} out of range 1..={n}"),
            ));
        }
        out.push((v - 1) as u8);
    }
    if out.windows(2).any(|w| w[0] >= w[1]) {
        return Err(serr(what, "indices must be strictly increasing"));
    }
    Ok(out)
}

fn ast_int(a: &Ast) -> Option<i64> {
    match a {
        Ast::Num(r) if r.is_integer() => r.to_integer().to_i64(),
        _ => None,
    }
}

fn eval_ast<C: ScalarGrammar>(ast: &Ast, n: usize) -> Result<Val<C>, GrammarError> {
    match ast {
        Ast::Num(r) => Ok(Val::S(C::from_rat(n, r))),
        Ast::Imag => C::imaginary(n)
            .map(Val::S)
            .ok_or_else(|| serr("i", "imaginary constants need the trig ring")),
        Ast::Var { axis1, exp } => {
            if *axis1 < 1 || *axis1 > n {
                return Err(serr("x", format!("axis {axis1} out of range 1..={n}")));
            }
            C::var_pow(n, axis1 - 1, *exp)
                .map(Val::S)
                .ok_or_else(|| serr("x", "polynomial variables need the poly ring"))
        }
        Ast::FormBasis(list) => {
            let idx = check_tuple(list, n, "dx")?;
            Ok(Val::F(Form::basis(n, idx)))
        }
        Ast::VecBasis(list) => {
            let idx = check_tuple(list, n, "e")?;
            Ok(Val::V(MultiVec::basis(n, idx)))
        }
        Ast::Mode(list) => {
            if list.len() != n {
                return Err(serr(
                    "e[..]",
                    format!("mode needs {n} frequencies, found {}", list.len()),
                ));
            }
            let mut freq = Vec::with_capacity(n);
            for &v in list {
                let f = i32::try_from(v)
                    .map_err(|_| serr("e[..]", format!("frequency {v} out of range")))?;
                freq.push(f);
            }
            C::trig_mode(n, freq)
                .map(Val::S)
                .ok_or_else(|| serr("e[..]", "trig modes need the trig ring"))
        }
        Ast::Neg(a) => match eval_ast::<C>(a, n)? {
            Val::S(c) => Ok(Val::S(c.neg())),
            Val::F(f) => Ok(Val::F(f.neg())),
            Val::V(v) => Ok(Val::V(v.neg())),
            Val::G(g) => Ok(Val::G(-g)),
            Val::J(_) => Err(serr("-", "cannot negate a report")),
        },
        Ast::Add(a, b) => add_vals(eval_ast::<C>(a, n)?, eval_ast::<C>(b, n)?, false),
        Ast::Sub(a, b) => add_vals(eval_ast::<C>(a, n)?, eval_ast::<C>(b, n)?, true),
        Ast::Mul(a, b) => mul_vals(eval_ast::<C>(a, n)?, eval_ast::<C>(b, n)?),
        Ast::Wedge(a, b) => wedge_vals(eval_ast::<C>(a, n)?, eval_ast::<C>(b, n)?),
        Ast::Call { name, args, .. } => eval_call::<C>(name, args, n),
        Ast::Brace {
            degree,
            is_vec,
            items,
            ..
        } => eval_brace::<C>(*degree, *is_vec, items, n),
        Ast::DiffOpLit { .. } => Err(serr(
            "diffop",
            "operator literals are only valid inside factor(...)",
        )),
    }
}

fn add_vals<C: ScalarGrammar>(a: Val<C>, b: Val<C>, sub: bool) -> Result<Val<C>, GrammarError> {
    let op = if sub { "-" } else { "+" };
    match (a, b) {
        (Val::S(x), Val::S(y)) => Ok(Val::S(if sub { x.sub(&y) } else { x.add(&y) })),
        (Val::F(x), Val::F(y)) => {
            let y = if sub { y.neg() } else { y };
            x.try_add(&y).map(Val::F).map_err(|e| serr(op, e.to_string()))
        }
        (Val::V(x), Val::V(y)) => {
            let y = if sub { y.neg() } else { y };
            x.try_add(&y).map(Val::V).map_err(|e| serr(op, e.to_string()))
        }
        (Val::G(x), Val::G(y)) => Ok(Val::G(if sub { x - y } else { x + y })),
        (a, b) => Err(serr(
            op,
            format!("cannot combine {} and {}", a.shape(), b.shape()),
        )),
    }
}

fn mul_vals<C: ScalarGrammar>(a: Val<C>, b: Val<C>) -> Result<Val<C>, GrammarError> {
    match (a, b) {
        (Val::S(x), Val::S(y)) => Ok(Val::S(x.mul(&y))),
        (Val::S(s), Val::F(f)) | (Val::F(f), Val::S(s)) => Ok(Val::F(f.scale(&s))),
        (Val::S(s), Val::V(v)) | (Val::V(v), Val::S(s)) => Ok(Val::V(v.scale(&s))),
        (Val::G(x), Val::G(y)) => Ok(Val::G(x * y)),
        (Val::F(_), Val::F(_)) | (Val::V(_), Val::V(_)) => {
            Err(serr("*", "use '^' for the wedge product"))
        }
        (a, b) => Err(serr(
            "*",
            format!("cannot multiply {} by {}", a.shape(), b.shape()),
        )),
    }
}

fn wedge_vals<C: ScalarGrammar>(a: Val<C>, b: Val<C>) -> Result<Val<C>, GrammarError> {
    match (a, b) {
        (Val::F(x), Val::F(y)) => Ok(Val::F(x.wedge(&y))),
        (Val::V(x), Val::V(y)) => Ok(Val::V(x.wedge(&y))),
        // a wedge with a scalar operand is plain multiplication
        (a @ Val::S(_), b) | (a, b @ Val::S(_)) => mul_vals(a, b),
        (a, b) => Err(serr(
            "^",
            format!("cannot wedge {} with {}", a.shape(), b.shape()),
        )),
    }
}

fn grade1<C: ScalarGrammar>(op: &str, v: MultiVec<C>) -> Result<MultiVec<C>, GrammarError> {
    if v.degree() != 1 {
        return Err(serr(
            op,
            format!("expected a grade-1 field, found grade {}", v.degree()),
        ));
    }
    Ok(v)
}

fn eval_call<C: ScalarGrammar>(
    name: &str,
    args: &[Ast],
    n: usize,
) -> Result<Val<C>, GrammarError> {
    let lname = name.to_ascii_lowercase();
    let op = lname.as_str();
    let arity = |k: usize| -> Result<(), GrammarError> {
        if args.len() != k {
            Err(serr(
                op,
                format!("expects {k} argument(s), found {}", args.len()),
            ))
        } else {
            Ok(())
        }
    };
    match op {
        "bracket" => {
            arity(2)?;
            match (eval_ast::<C>(&args[0], n)?, eval_ast::<C>(&args[1], n)?) {
                (Val::F(a), Val::F(b)) => leibniz_bracket(&a, &b)
                    .map(Val::F)
                    .map_err(|e| serr(op, e.to_string())),
                (Val::V(a), Val::V(b)) => {
                    let a = grade1(op, a)?;
                    let b = grade1(op, b)?;
                    Ok(Val::V(lie_bracket(&a, &b)))
                }
                (a, b) => Err(serr(
                    op,
                    format!(
                        "expects two forms or two grade-1 fields, found {} and {}",
                        a.shape(),
                        b.shape()
                    ),
                )),
            }
        }
        "d" => {
            arity(1)?;
            match eval_ast::<C>(&args[0], n)? {
                Val::F(f) => Ok(Val::F(f.d())),
                Val::S(s) => Ok(Val::F(Form::scalar(n, s).d())),
                v => Err(serr(op, format!("expects a form, found {}", v.shape()))),
            }
        }
        "iota" => {
            arity(2)?;
            match (eval_ast::<C>(&args[0], n)?, eval_ast::<C>(&args[1], n)?) {
                (Val::V(v), Val::F(f)) => Ok(Val::F(contract(&v, &f))),
                (a, b) => Err(serr(
                    op,
                    format!(
                        "expects (multivector, form), found ({}, {})",
                        a.shape(),
                        b.shape()
                    ),
                )),
            }
        }
        "flat" => {
            arity(1)?;
            match eval_ast::<C>(&args[0], n)? {
                Val::V(v) => Ok(Val::F(flat(&v))),
                v => Err(serr(op, format!("expects a multivector, found {}", v.shape()))),
            }
        }
        "sharp" => {
            arity(1)?;
            match eval_ast::<C>(&args[0], n)? {
                Val::F(f) => Ok(Val::V(sharp(&f))),
                v => Err(serr(op, format!("expects a form, found {}", v.shape()))),
            }
        }
        "xfield" => {
            arity(1)?;
            match eval_ast::<C>(&args[0], n)? {
                Val::F(f) => hamiltonian_field(&f)
                    .map(Val::V)
                    .map_err(|e| serr(op, e.to_string())),
                v => Err(serr(op, format!("expects a form, found {}", v.shape()))),
            }
        }
        "div" => {
            arity(1)?;
            match eval_ast::<C>(&args[0], n)? {
                Val::V(v) => {
                    let v = grade1(op, v)?;
                    Ok(Val::S(divergence(&v)))
                }
                v => Err(serr(op, format!("expects a field, found {}", v.shape()))),
            }
        }
        "delta" => {
            arity(1)?;
            match eval_ast::<C>(&args[0], n)? {
                Val::V(v) => Ok(Val::V(delta(&v))),
                v => Err(serr(op, format!("expects a multivector, found {}", v.shape()))),
            }
        }
        "lich" | "cocycle" => {
            arity(3)?;
            match (
                eval_ast::<C>(&args[0], n)?,
                eval_ast::<C>(&args[1], n)?,
                eval_ast::<C>(&args[2], n)?,
            ) {
                (Val::F(s), Val::V(x), Val::V(y)) => {
                    let x = grade1(op, x)?;
                    let y = grade1(op, y)?;
                    match C::lich(&s, &x, &y) {
                        None => Err(serr(op, "requires the trig ring")),
                        Some(Err(msg)) => Err(serr(op, msg)),
                        Some(Ok(g)) => Ok(Val::G(g)),
                    }
                }
                (a, b, c) => Err(serr(
                    op,
                    format!(
                        "expects (2-form, field, field), found ({}, {}, {})",
                        a.shape(),
                        b.shape(),
                        c.shape()
                    ),
                )),
            }
        }
        "cycle" => {
            if args.len() != 3 && args.len() != 4 {
                return Err(serr(
                    op,
                    format!("expects 3 or 4 arguments, found {}", args.len()),
                ));
            }
            let a1 = ast_int(&args[0])
                .ok_or_else(|| serr(op, "first two arguments are the fixed axes (integers)"))?;
            let b1 = ast_int(&args[1])
                .ok_or_else(|| serr(op, "first two arguments are the fixed axes (integers)"))?;
            if a1 < 1 || b1 < 1 || a1 as usize > n || b1 as usize > n || a1 == b1 {
                return Err(serr(op, format!("fixed axes must be distinct in 1..={n}")));
            }
            let (a0, b0) = if a1 < b1 {
                ((a1 - 1) as u8, (b1 - 1) as u8)
            } else {
                ((b1 - 1) as u8, (a1 - 1) as u8)
            };
            if args.len() == 3 {
                match eval_ast::<C>(&args[2], n)? {
                    Val::F(g) => match C::cycle_integral(a0, b0, &g) {
                        None => Err(serr(op, "requires the trig ring")),
                        Some(Err(msg)) => Err(serr(op, msg)),
                        Some(Ok(v)) => Ok(Val::G(v)),
                    },
                    v => Err(serr(op, format!("expects a form, found {}", v.shape()))),
                }
            } else {
                match (eval_ast::<C>(&args[2], n)?, eval_ast::<C>(&args[3], n)?) {
                    (Val::V(x), Val::V(y)) => {
                        let x = grade1(op, x)?;
                        let y = grade1(op, y)?;
                        match C::cycle_pairing(a0, b0, &x, &y) {
                            None => Err(serr(op, "requires the trig ring")),
                            Some(Err(msg)) => Err(serr(op, msg)),
                            Some(Ok(v)) => Ok(Val::G(v)),
                        }
                    }
                    (a, b) => Err(serr(
                        op,
                        format!(
                            "expects two fields, found {} and {}",
                            a.shape(),
                            b.shape()
                        ),
                    )),
                }
            }
        }
        "decompose" => {
            arity(1)?;
            let routed = match eval_ast::<C>(&args[0], n)? {
                Val::V(v) => C::decompose_vec(&v),
                Val::F(f) => C::decompose_form(&f),
                // scalars are degree-0 targets for the squares path
                Val::S(s) => C::decompose_form(&Form::scalar(n, s)),
                v => {
                    return Err(serr(
                        op,
                        format!("expects a bivector or a form, found {}", v.shape()),
                    ))
                }
            };
            match routed {
                None => Err(serr(op, "requires the poly ring")),
                Some(Err(msg)) => Err(serr(op, msg)),
                Some(Ok(j)) => Ok(Val::J(j)),
            }
        }
        "factor" => {
            arity(1)?;
            let Ast::DiffOpLit { json } = &args[0] else {
                return Err(serr(op, "expects a diffop{...} operator literal"));
            };
            match C::factor_operator(json) {
                None => Err(serr(op, "requires the poly ring")),
                Some(Err(msg)) => Err(serr(op, msg)),
                Some(Ok(j)) => Ok(Val::J(j)),
            }
        }
        _ => Err(serr(op, "unknown function")),
    }
}

fn eval_brace<C: ScalarGrammar>(
    degree: usize,
    is_vec: bool,
    items: &[BraceItem],
    n: usize,
) -> Result<Val<C>, GrammarError> {
    let what = if is_vec { "e" } else { "dx" };
    let mut form = Form::zero(n, degree as i32);
    let mut vec = MultiVec::zero(n, degree as i32);
    for item in items {
        let coeff = match eval_in::<C>(&item.coeff_src, n).map_err(|e| match e {
            GrammarError::Parse { pos, msg } => GrammarError::Parse {
                pos: pos + item.coeff_pos,
                msg,
            },
            other => other,
        })? {
            Val::S(c) => c,
            v => {
                return Err(serr(
                    "literal",
                    format!("coefficient must be a scalar, found {}", v.shape()),
                ))
            }
        };
        let idx = check_tuple(&item.indices, n, what)?;
        if is_vec {
            vec = vec.add(&MultiVec::term(n, idx, coeff));
        } else {
            form = form.add(&Form::term(n, idx, coeff));
        }
    }
    Ok(if is_vec { Val::V(vec) } else { Val::F(form) })
}

fn eval_in<C: ScalarGrammar>(src: &str, n: usize) -> Result<Val<C>, GrammarError> {
    let ast = Parser::parse(src)?;
    eval_ast::<C>(&ast, n)
}

// ---------------------------------------------------------------------------
// Public evaluation interface
// ---------------------------------------------------------------------------

/// A fully evaluated expression.  Degree-0 forms and grade-0 multivectors
/// are normalized to scalars, so rendering and re-parsing round-trips.
#[derive(Debug, Clone, PartialEq)]
pub enum Evaluated {
    PolyScalar(PolyCoeff),
    PolyForm(Form<PolyCoeff>),
    PolyVec(MultiVec<PolyCoeff>),
    TrigScalar(TrigCoeff),
    TrigForm(Form<TrigCoeff>),
    TrigVec(MultiVec<TrigCoeff>),
    Gauss(GaussRat),
    Json(serde_json::Value),
}

fn wrap_poly(v: Val<PolyCoeff>) -> Evaluated {
    match v {
        Val::S(c) => Evaluated::PolyScalar(c),
        Val::F(f) if f.degree() == 0 => Evaluated::PolyScalar(f.scalar_part()),
        Val::F(f) => Evaluated::PolyForm(f),
        Val::V(v) if v.degree() == 0 => Evaluated::PolyScalar(v.scalar_part()),
        Val::V(v) => Evaluated::PolyVec(v),
        Val::G(g) => Evaluated::Gauss(g),
        Val::J(j) => Evaluated::Json(j),
    }
}

fn wrap_trig(v: Val<TrigCoeff>) -> Evaluated {
    match v {
        Val::S(c) => Evaluated::TrigScalar(c),
        Val::F(f) if f.degree() == 0 => Evaluated::TrigScalar(f.scalar_part()),
        Val::F(f) => Evaluated::TrigForm(f),
        Val::V(v) if v.degree() == 0 => Evaluated::TrigScalar(v.scalar_part()),
        Val::V(v) => Evaluated::TrigVec(v),
        Val::G(g) => Evaluated::Gauss(g),
        Val::J(j) => Evaluated::Json(j),
    }
}

/// Split the optional trailing `@ poly|trig n=N` context off an
/// expression, falling back to `default` for unspecified parts.
pub fn split_context(
    input: &str,
    default: Option<Context>,
) -> Result<(&str, Context), GrammarError> {
    let (body, ring, n) = if let Some(at) = input.rfind('@') {
        let mut ring = default.map(|c| c.ring);
        let mut n = default.map(|c| c.n);
        for tok in input[at + 1..].split_whitespace() {
            if let Some(r) = Ring::from_name(tok) {
                ring = Some(r);
            } else if let Some(v) = tok.strip_prefix("n=") {
                let parsed: usize = v
                    .parse()
                    .map_err(|_| perr(at + 1, format!("bad dimension '{v}'")))?;
                n = Some(parsed);
            } else {
                return Err(perr(at + 1, format!("bad context token '{tok}'")));
            }
        }
        (&input[..at], ring, n)
    } else {
        (input, default.map(|c| c.ring), default.map(|c| c.n))
    };
    let ring = ring.ok_or_else(|| perr(input.len(), "context must name a ring (poly|trig)"))?;
    let n = n.ok_or_else(|| perr(input.len(), "context must set the dimension (n=N)"))?;
    if !(1..=MAX_DIM).contains(&n) {
        return Err(perr(
            input.len(),
            format!("dimension must be in 1..={MAX_DIM}"),
        ));
    }
    Ok((body, Context { ring, n }))
}

/// Parse and evaluate an expression.  The trailing `@ ...` context (if
/// any) overrides `default`; at least one of the two must determine the
/// ring and dimension.
pub fn eval_expr(input: &str, default: Option<Context>) -> Result<Evaluated, GrammarError> {
    let (body, ctx) = split_context(input, default)?;
    match ctx.ring {
        Ring::Poly => Ok(wrap_poly(eval_in::<PolyCoeff>(body, ctx.n)?)),
        Ring::Trig => Ok(wrap_trig(eval_in::<TrigCoeff>(body, ctx.n)?)),
    }
}

/// Parse a polynomial scalar in the expression grammar.
pub fn parse_poly(src: &str, n: usize) -> Result<PolyCoeff, GrammarError> {
    match eval_in::<PolyCoeff>(src, n)? {
        Val::S(c) => Ok(c),
        v => Err(serr("scalar", format!("expected a scalar, found {}", v.shape()))),
    }
}

/// Parse a trig scalar in the expression grammar.
pub fn parse_trig(src: &str, n: usize) -> Result<TrigCoeff, GrammarError> {
    match eval_in::<TrigCoeff>(src, n)? {
        Val::S(c) => Ok(c),
        v => Err(serr("scalar", format!("expected a scalar, found {}", v.shape()))),
    }
}

/// Parse a rational constant.
pub fn parse_rat(src: &str) -> Result<Rat, GrammarError> {
    let c = parse_poly(src, 1)?;
    if c.is_zero() {
        return Ok(rat_int(0));
    }
    if c.total_degree() == Some(0) {
        Ok(c.coeff_of(&[0]))
    } else {
        Err(serr("rational", "not a constant"))
    }
}

/// Parse a Gaussian-rational constant (`1+1/2 i`, `-2 i`, `3/4`).
pub fn parse_gauss(src: &str) -> Result<GaussRat, GrammarError> {
    let c = parse_trig(src, 1)?;
    if c.is_zero() {
        return Ok(GaussRat::zero());
    }
    if c.mode_count() == 1 && !c.coeff_of(&[0]).is_zero() {
        Ok(c.coeff_of(&[0]))
    } else {
        Err(serr("constant", "not a constant (contains nonzero modes)"))
    }
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

fn render_terms<C: ScalarGrammar>(
    dim: usize,
    terms: Vec<(&Vec<u8>, &C)>,
    prefix: &str,
) -> String {
    let one = C::one(dim);
    let mut out = String::new();
    let mut first = true;
    for (idx, c) in terms {
        let basis = idx
            .iter()
            .map(|&i| format!("{}{}", prefix, i + 1))
            .collect::<Vec<_>>()
            .join("^");
        let piece = if *c == one {
            basis
        } else {
            let ct = c.to_string();
            let ct = if c.needs_parens() {
                format!("({ct})")
            } else {
                ct
            };
            format!("{ct} {basis}")
        };
        if first {
            out = piece;
            first = false;
        } else if let Some(rest) = piece.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&piece);
        }
    }
    out
}

/// Canonical text of a form in the light grammar (`-1 dx3`,
/// `3/2 x1 dx1^dx2 - 1 dx1^dx3`).
pub fn render_form<C: ScalarGrammar>(f: &Form<C>) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    if f.degree() == 0 {
        return f.scalar_part().to_string();
    }
    render_terms(f.dim(), f.terms().collect(), "dx")
}

/// Canonical text of a multivector in the light grammar (`x1 e2 + e1^e3`).
pub fn render_multivec<C: ScalarGrammar>(v: &MultiVec<C>) -> String {
    if v.is_zero() {
        return "0".to_string();
    }
    if v.degree() == 0 {
        return v.scalar_part().to_string();
    }
    render_terms(v.dim(), v.terms().collect(), "e")
}

impl Evaluated {
    /// Canonical text in the same grammar the evaluator reads.
    pub fn render(&self) -> String {
        match self {
            Evaluated::PolyScalar(c) => c.to_string(),
            Evaluated::TrigScalar(c) => c.to_string(),
            Evaluated::PolyForm(f) => render_form(f),
            Evaluated::TrigForm(f) => render_form(f),
            Evaluated::PolyVec(v) => render_multivec(v),
            Evaluated::TrigVec(v) => render_multivec(v),
            Evaluated::Gauss(g) => gauss_to_string(g),
            Evaluated::Json(j) => j.to_string(),
        }
    }

    /// JSON mirror of the value.
    pub fn to_json(&self) -> serde_json::Value {
        let scalar = |ring: &str, dim: usize, value: String| {
            serde_json::json!({
                "format_version": FORMAT_VERSION,
                "kind": "scalar",
                "ring": ring,
                "dim": dim,
                "value": value,
            })
        };
        match self {
            Evaluated::PolyScalar(c) => scalar("poly", c.dim(), c.to_string()),
            Evaluated::TrigScalar(c) => scalar("trig", c.dim(), c.to_string()),
            Evaluated::Gauss(g) => scalar("constant", 0, gauss_to_string(g)),
            Evaluated::PolyForm(f) => serde_json::to_value(form_to_json(f)).unwrap(),
            Evaluated::TrigForm(f) => serde_json::to_value(form_to_json(f)).unwrap(),
            Evaluated::PolyVec(v) => serde_json::to_value(multivec_to_json(v)).unwrap(),
            Evaluated::TrigVec(v) => serde_json::to_value(multivec_to_json(v)).unwrap(),
            Evaluated::Json(j) => j.clone(),
        }
    }
}

// ---------------------------------------------------------------------------
// JSON mirrors
// ---------------------------------------------------------------------------

fn default_format_version() -> String {
    FORMAT_VERSION.to_string()
}

/// JSON mirror of a form or multivector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorJson {
    #[serde(default = "default_format_version")]
    pub format_version: String,
    /// "form" | "multivector"
    pub kind: String,
    /// "poly" | "trig"
    pub ring: String,
    pub dim: usize,
    pub degree: i32,
    pub terms: Vec<TensorTermJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorTermJson {
    /// 1-based strictly increasing axis tuple.
    pub indices: Vec<usize>,
    /// Coefficient in the scalar grammar.
    pub coeff: String,
}

fn tensor_terms_json<C: ScalarGrammar>(terms: Vec<(&Vec<u8>, &C)>) -> Vec<TensorTermJson> {
    terms
        .into_iter()
        .map(|(idx, c)| TensorTermJson {
            indices: idx.iter().map(|&i| i as usize + 1).collect(),
            coeff: c.to_string(),
        })
        .collect()
}

pub fn form_to_json<C: ScalarGrammar>(f: &Form<C>) -> TensorJson {
    TensorJson {
        format_version: FORMAT_VERSION.to_string(),
        kind: "form".to_string(),
        ring: C::ring_name().to_string(),
        dim: f.dim(),
        degree: f.degree(),
        terms: tensor_terms_json(f.terms().collect()),
    }
}

pub fn multivec_to_json<C: ScalarGrammar>(v: &MultiVec<C>) -> TensorJson {
    TensorJson {
        format_version: FORMAT_VERSION.to_string(),
        kind: "multivector".to_string(),
        ring: C::ring_name().to_string(),
        dim: v.dim(),
        degree: v.degree(),
        terms: tensor_terms_json(v.terms().collect()),
    }
}

/// Exactly one side is populated, depending on the document's `kind`.
type ParsedTensor<C> = (Option<Form<C>>, Option<MultiVec<C>>);

fn tensor_from_json_in<C: ScalarGrammar>(j: &TensorJson) -> Result<ParsedTensor<C>, GrammarError> {
    let n = j.dim;
    if !(1..=MAX_DIM).contains(&n) {
        return Err(serr("json", format!("dimension must be in 1..={MAX_DIM}")));
    }
    let is_vec = match j.kind.as_str() {
        "form" => false,
        "multivector" => true,
        other => return Err(serr("json", format!("unknown kind '{other}'"))),
    };
    let mut form = Form::zero(n, j.degree);
    let mut vec = MultiVec::zero(n, j.degree);
    for term in &j.terms {
        if term.indices.len() as i32 != j.degree {
            return Err(serr(
                "json",
                format!(
                    "term has {} indices but degree is {}",
                    term.indices.len(),
                    j.degree
                ),
            ));
        }
        let raw: Vec<i64> = term.indices.iter().map(|&i| i as i64).collect();
        let idx = check_tuple(&raw, n, "json")?;
        let coeff = match eval_in::<C>(&term.coeff, n)? {
            Val::S(c) => c,
            v => {
                return Err(serr(
                    "json",
                    format!("coefficient must be a scalar, found {}", v.shape()),
                ))
            }
        };
        if is_vec {
            vec = vec.add(&MultiVec::term(n, idx, coeff));
        } else {
            form = form.add(&Form::term(n, idx, coeff));
        }
    }
    Ok(if is_vec {
        (None, Some(vec))
    } else {
        (Some(form), None)
    })
}

/// Decode a tensor JSON document (ring and kind are carried by the
/// document itself).
pub fn tensor_from_json(j: &TensorJson) -> Result<Evaluated, GrammarError> {
    match Ring::from_name(&j.ring) {
        Some(Ring::Poly) => {
            let (f, v) = tensor_from_json_in::<PolyCoeff>(j)?;
            Ok(match (f, v) {
                (Some(f), _) => wrap_poly(Val::F(f)),
                (_, Some(v)) => wrap_poly(Val::V(v)),
                _ => unreachable!(),
            })
        }
        Some(Ring::Trig) => {
            let (f, v) = tensor_from_json_in::<TrigCoeff>(j)?;
            Ok(match (f, v) {
                (Some(f), _) => wrap_trig(Val::F(f)),
                (_, Some(v)) => wrap_trig(Val::V(v)),
                _ => unreachable!(),
            })
        }
        None => Err(serr("json", format!("unknown ring '{}'", j.ring))),
    }
}

/// JSON mirror of a differential operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffOpJson {
    #[serde(default = "default_format_version")]
    pub format_version: String,
    pub n: usize,
    pub k: usize,
    pub width: usize,
    pub terms: Vec<DiffOpTermJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffOpTermJson {
    /// 1-based strictly increasing form-index tuple.
    #[serde(rename = "I")]
    pub i: Vec<usize>,
    /// Derivative multi-index, one exponent per axis.
    pub sigma: Vec<u16>,
    /// `width` polynomial coefficients in the scalar grammar.
    pub value: Vec<String>,
}

pub fn diffop_to_json(op: &DiffOp) -> DiffOpJson {
    DiffOpJson {
        format_version: FORMAT_VERSION.to_string(),
        n: op.n(),
        k: op.k(),
        width: op.width(),
        terms: op
            .terms()
            .map(|((idx, sigma), value)| DiffOpTermJson {
                i: idx.iter().map(|&i| i as usize + 1).collect(),
                sigma: sigma.clone(),
                value: value.iter().map(|f| f.to_string()).collect(),
            })
            .collect(),
    }
}

pub fn diffop_from_json(j: &DiffOpJson) -> Result<DiffOp, GrammarError> {
    if j.n < 1 || j.n > MAX_DIM {
        return Err(serr("diffop", format!("dimension must be in 1..={MAX_DIM}")));
    }
    let mut entries = Vec::with_capacity(j.terms.len());
    for term in &j.terms {
        let raw: Vec<i64> = term.i.iter().map(|&i| i as i64).collect();
        let idx = check_tuple(&raw, j.n, "diffop")?;
        let mut value = Vec::with_capacity(term.value.len());
        for src in &term.value {
            value.push(parse_poly(src, j.n)?);
        }
        entries.push((idx, term.sigma.clone(), value));
    }
    DiffOp::from_terms(j.n, j.k, j.width, entries).map_err(|e| serr("diffop", e.to_string()))
}

// ---------------------------------------------------------------------------
// Witness reports
// ---------------------------------------------------------------------------

/// JSON witness for a bracket decomposition: pair list, re-verification
/// flag, and the guaranteed size bound.
pub fn bracket_witness_json(w: &BracketWitness) -> serde_json::Value {
    let n = w.target.dim();
    serde_json::json!({
        "format_version": FORMAT_VERSION,
        "kind": "bracket-witness",
        "pairs": w
            .pairs
            .iter()
            .map(|(a, b)| serde_json::json!([form_to_json(a), form_to_json(b)]))
            .collect::<Vec<_>>(),
        "target": form_to_json(&w.target),
        "verified": w.verify(),
        "count": w.count(),
        "bound": BracketWitness::bound(n),
    })
}

/// JSON witness for a square decomposition: potentials, factor fields,
/// both re-verification flags, and the size bound.
pub fn square_witness_json(w: &SquareWitness) -> serde_json::Value {
    let n = w.target.dim();
    serde_json::json!({
        "format_version": FORMAT_VERSION,
        "kind": "square-witness",
        "potentials": w
            .potentials
            .iter()
            .map(form_to_json)
            .collect::<Vec<_>>(),
        "factors": w
            .factors
            .iter()
            .map(|(x, y)| serde_json::json!([multivec_to_json(x), multivec_to_json(y)]))
            .collect::<Vec<_>>(),
        "target": form_to_json(&w.target),
        "verified": w.verify() && w.verify_contraction_identity(),
        "count": w.count(),
        "bound": SquareWitness::bound(n),
    })
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
