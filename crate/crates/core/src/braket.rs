//! Text format for pure states, e.g. `(|0000> + |1111>)/sqrt(2)`.
//!
//! ```text
//! expr    = term { ("+" | "-") term }
//! term    = unary { ("*" | "/") unary | unary }      (juxtaposition multiplies)
//! unary   = ("-" | "+") unary | primary
//! primary = number | "i" | ("sqrt" | "√") primary | "(" expr ")" | ket
//! ket     = "|" bit { bit } (">" | "⟩")
//! ```
//!
//! Scalars are complex doubles; a term may multiply a scalar into a ket, and
//! kets may be added to kets of the same length. Coefficients of repeated kets
//! are summed. A number may not directly follow another operand without an
//! operator (`2 3` is rejected).

use num_complex::Complex64;

use crate::error::{Error, ParseError, Result, SourcePos};
use crate::state::{QubitState, MAX_QUBITS};

const MAX_DEPTH: usize = 128;
/// Longer inputs are rejected before lexing.
pub const MAX_INPUT_BYTES: usize = 16 * 1024;

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    /// A decimal literal.
    Scalar(f64),
    Imaginary,
    Sqrt(Box<StateExpression>),
    Negate(Box<StateExpression>),
    Add(Box<StateExpression>, Box<StateExpression>),
    Mul(Box<StateExpression>, Box<StateExpression>),
    Div(Box<StateExpression>, Box<StateExpression>),
    Ket(String),
}

/// Parsed expression tree; `offset` is the byte offset of the node in the source.
#[derive(Debug, Clone, PartialEq)]
pub struct StateExpression {
    pub kind: ExprKind,
    pub offset: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    I,
    Sqrt,
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Slash,
    Ket(String),
    End,
}

fn position(src: &str, offset: usize) -> SourcePos {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let line_start = before.rfind('\n').map_or(0, |p| p + 1);
    SourcePos {
        line,
        column: before[line_start..].chars().count() + 1,
    }
}

fn error(src: &str, offset: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        pos: position(src, offset),
        message: message.into(),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(at, ch)) = chars.peek() {
        match ch {
            c if c.is_whitespace() => {
                chars.next();
            }
            '(' | ')' | '+' | '-' | '*' | '/' | '√' => {
                chars.next();
                let tok = match ch {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    _ => Tok::Sqrt,
                };
                out.push((tok, at));
            }
            '|' => {
                chars.next();
                let mut bits = String::new();
                while let Some(&(_, b @ ('0' | '1'))) = chars.peek() {
                    bits.push(b);
                    chars.next();
                }
                match chars.next() {
                    Some((_, '>' | '⟩')) if !bits.is_empty() => out.push((Tok::Ket(bits), at)),
                    Some((p, _)) if bits.is_empty() => {
                        return Err(error(src, p, "expected 0 or 1 after '|'"))
                    }
                    Some((p, _)) => return Err(error(src, p, "expected '>' to close ket")),
                    None => return Err(error(src, src.len(), "unterminated ket")),
                }
            }
            c if c.is_ascii_digit() || c == '.' => {
                let start = at;
                let mut end = at;
                let mut seen_exp = false;
                let mut prev = ' ';
                while let Some(&(p, c)) = chars.peek() {
                    let ok = c.is_ascii_digit()
                        || (c == '.' && !seen_exp)
                        || ((c == 'e' || c == 'E') && !seen_exp)
                        || ((c == '+' || c == '-') && (prev == 'e' || prev == 'E'));
                    if !ok {
                        break;
                    }
                    if c == 'e' || c == 'E' {
                        seen_exp = true;
                    }
                    prev = c;
                    end = p + c.len_utf8();
                    chars.next();
                }
                let text = &src[start..end];
                let value: f64 = text
                    .parse()
                    .map_err(|_| error(src, start, format!("malformed number '{text}'")))?;
                out.push((Tok::Num(value), start));
            }
            c if c.is_alphabetic() => {
                let start = at;
                let mut end = at;
                while let Some(&(p, c)) = chars.peek() {
                    if !c.is_alphabetic() {
                        break;
                    }
                    end = p + c.len_utf8();
                    chars.next();
                }
                match &src[start..end] {
                    "i" => out.push((Tok::I, start)),
                    "sqrt" => out.push((Tok::Sqrt, start)),
                    other => {
                        return Err(error(src, start, format!("unknown identifier '{other}'")))
                    }
                }
            }
            other => return Err(error(src, at, format!("unexpected character '{other}'"))),
        }
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    depth: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        error(self.src, self.offset(), message)
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.err("expression nested too deeply"));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<StateExpression, ParseError> {
        self.enter()?;
        let mut lhs = self.term()?;
        loop {
            let offset = self.offset();
            let negate = match self.peek() {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => break,
            };
            self.bump();
            let mut rhs = self.term()?;
            if negate {
                rhs = node(ExprKind::Negate(Box::new(rhs)), offset);
            }
            lhs = node(ExprKind::Add(Box::new(lhs), Box::new(rhs)), offset);
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<StateExpression, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let offset = self.offset();
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = node(ExprKind::Mul(Box::new(lhs), Box::new(rhs)), offset);
                }
                Tok::Slash => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = node(ExprKind::Div(Box::new(lhs), Box::new(rhs)), offset);
                }
                Tok::I | Tok::Sqrt | Tok::LParen | Tok::Ket(_) => {
                    let rhs = self.primary()?;
                    lhs = node(ExprKind::Mul(Box::new(lhs), Box::new(rhs)), offset);
                }
                Tok::Num(_) => return Err(self.err("expected an operator before number")),
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<StateExpression, ParseError> {
        let offset = self.offset();
        match self.peek() {
            Tok::Minus => {
                self.bump();
                self.enter()?;
                let inner = self.unary()?;
                self.depth -= 1;
                Ok(node(ExprKind::Negate(Box::new(inner)), offset))
            }
            Tok::Plus => {
                self.bump();
                self.enter()?;
                let inner = self.unary();
                self.depth -= 1;
                inner
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<StateExpression, ParseError> {
        let (tok, offset) = self.bump();
        match tok {
            Tok::Num(v) => Ok(node(ExprKind::Scalar(v), offset)),
            Tok::I => Ok(node(ExprKind::Imaginary, offset)),
            Tok::Ket(bits) => Ok(node(ExprKind::Ket(bits), offset)),
            Tok::Sqrt => {
                self.enter()?;
                let arg = self.primary()?;
                self.depth -= 1;
                Ok(node(ExprKind::Sqrt(Box::new(arg)), offset))
            }
            Tok::LParen => {
                let inner = self.expr()?;
                match self.peek() {
                    Tok::RParen => {
                        self.bump();
                        Ok(inner)
                    }
                    _ => Err(self.err("expected ')'")),
                }
            }
            Tok::End => Err(error(self.src, offset, "unexpected end of input")),
            other => Err(error(self.src, offset, format!("unexpected {}", describe(&other)))),
        }
    }
}

fn describe(t: &Tok) -> &'static str {
    match t {
        Tok::RParen => "')'",
        Tok::Plus => "'+'",
        Tok::Minus => "'-'",
        Tok::Star => "'*'",
        Tok::Slash => "'/'",
        _ => "token",
    }
}

fn node(kind: ExprKind, offset: usize) -> StateExpression {
    StateExpression { kind, offset }
}

/// Parses source text into an expression tree without evaluating it.
pub fn parse_expression(text: &str) -> Result<StateExpression, ParseError> {
    if text.len() > MAX_INPUT_BYTES {
        return Err(error(text, 0, format!("input longer than {MAX_INPUT_BYTES} bytes")));
    }
    let toks = lex(text)?;
    let mut p = Parser {
        src: text,
        toks,
        pos: 0,
        depth: 0,
    };
    if matches!(p.peek(), Tok::End) {
        return Err(p.err("empty state expression"));
    }
    let e = p.expr()?;
    if !matches!(p.peek(), Tok::End) {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

#[derive(Debug, Clone)]
enum Value {
    Scalar(Complex64),
    Ket { n: usize, amps: Vec<Complex64> },
}

/// Sums and products parse left-deep, so walk the left spine in a loop and
/// recurse only into right operands, whose depth the parser bounds.
fn eval(src: &str, e: &StateExpression) -> Result<Value, ParseError> {
    let mut spine = Vec::new();
    let mut cur = e;
    while let ExprKind::Add(l, _) | ExprKind::Mul(l, _) | ExprKind::Div(l, _) = &cur.kind {
        spine.push(cur);
        cur = l;
    }
    let mut acc = eval_node(src, cur)?;
    for op in spine.into_iter().rev() {
        acc = apply(src, op, acc)?;
    }
    Ok(acc)
}

fn apply(src: &str, e: &StateExpression, lhs: Value) -> Result<Value, ParseError> {
    let fail = |message: String| error(src, e.offset, message);
    Ok(match &e.kind {
        ExprKind::Add(_, r) => match (lhs, eval(src, r)?) {
            (Value::Scalar(a), Value::Scalar(b)) => Value::Scalar(a + b),
            (Value::Ket { n: n1, amps: a1 }, Value::Ket { n: n2, amps: a2 }) => {
                if n1 != n2 {
                    return Err(fail(format!("mixed ket lengths {n1} and {n2}")));
                }
                Value::Ket {
                    n: n1,
                    amps: a1.into_iter().zip(a2).map(|(x, y)| x + y).collect(),
                }
            }
            _ => return Err(fail("cannot add a scalar and a ket".into())),
        },
        ExprKind::Mul(_, r) => match (lhs, eval(src, r)?) {
            (Value::Scalar(a), Value::Scalar(b)) => Value::Scalar(a * b),
            (Value::Scalar(s), Value::Ket { n, amps }) | (Value::Ket { n, amps }, Value::Scalar(s)) => {
                Value::Ket {
                    n,
                    amps: amps.into_iter().map(|a| a * s).collect(),
                }
            }
            _ => return Err(fail("product of two kets is not supported".into())),
        },
        ExprKind::Div(_, r) => {
            let d = match eval(src, r)? {
                Value::Scalar(d) => d,
                Value::Ket { .. } => return Err(fail("cannot divide by a ket".into())),
            };
            if d.norm_sqr() == 0.0 {
                return Err(fail("division by zero".into()));
            }
            match lhs {
                Value::Scalar(a) => Value::Scalar(a / d),
                Value::Ket { n, amps } => Value::Ket {
                    n,
                    amps: amps.into_iter().map(|a| a / d).collect(),
                },
            }
        }
        _ => unreachable!("apply is only called on binary nodes"),
    })
}

fn eval_node(src: &str, e: &StateExpression) -> Result<Value, ParseError> {
    let fail = |message: String| error(src, e.offset, message);
    Ok(match &e.kind {
        ExprKind::Scalar(v) => Value::Scalar(Complex64::new(*v, 0.0)),
        ExprKind::Imaginary => Value::Scalar(Complex64::new(0.0, 1.0)),
        ExprKind::Ket(bits) => {
            let n = bits.len();
            if n > MAX_QUBITS {
                return Err(fail(format!("ket |{bits}> has more than {MAX_QUBITS} qubits")));
            }
            let index = usize::from_str_radix(bits, 2).expect("lexer only admits 0/1");
            let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
            amps[index] = Complex64::new(1.0, 0.0);
            Value::Ket { n, amps }
        }
        ExprKind::Sqrt(arg) => match eval(src, arg)? {
            Value::Scalar(z) if z.im == 0.0 && z.re >= 0.0 => {
                Value::Scalar(Complex64::new(z.re.sqrt(), 0.0))
            }
            Value::Scalar(_) => return Err(fail("sqrt needs a non-negative real argument".into())),
            Value::Ket { .. } => return Err(fail("sqrt of a ket".into())),
        },
        ExprKind::Negate(inner) => match eval(src, inner)? {
            Value::Scalar(z) => Value::Scalar(-z),
            Value::Ket { n, amps } => Value::Ket {
                n,
                amps: amps.into_iter().map(|a| -a).collect(),
            },
        },
        ExprKind::Add(..) | ExprKind::Mul(..) | ExprKind::Div(..) => eval(src, e)?,
    })
}

/// Evaluates an expression to `(qubit count, amplitudes)`; no normalization check.
pub fn evaluate(text: &str) -> Result<(usize, Vec<Complex64>), ParseError> {
    let e = parse_expression(text)?;
    match eval(text, &e)? {
        Value::Ket { n, amps } => Ok((n, amps)),
        Value::Scalar(_) => Err(error(text, 0, "expression contains no ket")),
    }
}

/// Parses a state that must already be normalized (within 1e-6).
pub fn parse_state(text: &str) -> Result<QubitState> {
    parse_state_with(text, false)
}

pub fn parse_state_with(text: &str, normalize: bool) -> Result<QubitState> {
    let (n, amps) = evaluate(text)?;
    match QubitState::new(n, amps, normalize) {
        Err(Error::NonFinite(_)) => Err(Error::Parse(error(text, 0, "amplitude is not finite"))),
        other => other,
    }
}

fn bits(index: usize, n: usize) -> String {
    format!("{index:0n$b}")
}

/// `x` rounded to `digits` significant digits, printed in the shortest form that parses back.
fn format_coeff(x: f64, digits: usize) -> String {
    let digits = digits.clamp(1, 17);
    let rounded: f64 = format!("{:.*e}", digits - 1, x)
        .parse()
        .expect("formatted float parses");
    let a = rounded.abs();
    if a != 0.0 && !(1e-4..1e15).contains(&a) {
        format!("{rounded:e}")
    } else {
        format!("{rounded}")
    }
}

/// Renders a state as a sum of `coeff|bits>` terms, real and imaginary parts as separate terms.
pub fn format_state(state: &QubitState, digits: usize) -> String {
    let n = state.n();
    let mut terms: Vec<(bool, String)> = Vec::new();
    for (k, a) in state.amps().iter().enumerate() {
        let ket = bits(k, n);
        for (value, suffix) in [(a.re, ""), (a.im, "i")] {
            if value == 0.0 {
                continue;
            }
            let text = format_coeff(value.abs(), digits);
            terms.push((value < 0.0, format!("{text}{suffix}|{ket}>")));
        }
    }
    let mut out = String::new();
    for (i, (neg, t)) in terms.iter().enumerate() {
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(t);
    }
    out
}
