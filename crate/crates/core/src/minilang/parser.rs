//! Lexer and recursive-descent parser for MiniOO. The grammar is LL(1)
//! except for statements starting with an identifier, which need one extra
//! token to tell an assignment (`x = ...`) from a call (`A.m()`).

use std::fmt;

use thiserror::Error;

use super::ast::*;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {line}:{column}: found {found}, expected {}", .expected.join(" | "))]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub found: String,
    pub expected: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Str(String),
    Kw(&'static str),
    Punct(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(name) => write!(f, "identifier `{name}`"),
            Tok::Int(v) => write!(f, "integer `{v}`"),
            Tok::Str(s) => write!(f, "string {s:?}"),
            Tok::Kw(k) => write!(f, "`{k}`"),
            Tok::Punct(p) => write!(f, "`{p}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

const KEYWORDS: &[&str] = &[
    "class", "extends", "if", "else", "while", "for", "switch", "case", "default", "return",
    "self", "true", "false",
];

// Longest first so `==` wins over `=`.
const PUNCT: &[&str] = &[
    "==", "!=", "<=", ">=", "&&", "||", "{", "}", "(", ")", ";", ":", ",", ".", "=", "<", ">", "!",
    "+", "-", "*", "/",
];

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    span: Span,
}

fn lex(src: &str) -> Result<Vec<Token>, SyntaxError> {
    let chars: Vec<char> = src.chars().collect();
    let mut tokens = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);

    let advance = |i: &mut usize, line: &mut usize, col: &mut usize| {
        let c = chars[*i];
        *i += 1;
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    };

    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, column: col };
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col);
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col);
            }
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'*') {
            advance(&mut i, &mut line, &mut col);
            advance(&mut i, &mut line, &mut col);
            loop {
                if i >= chars.len() {
                    return Err(SyntaxError {
                        line,
                        column: col,
                        found: "end of input".into(),
                        expected: vec!["`*/`".into()],
                    });
                }
                if chars[i] == '*' && chars.get(i + 1) == Some(&'/') {
                    advance(&mut i, &mut line, &mut col);
                    advance(&mut i, &mut line, &mut col);
                    break;
                }
                advance(&mut i, &mut line, &mut col);
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                advance(&mut i, &mut line, &mut col);
            }
            let word: String = chars[start..i].iter().collect();
            let tok = match KEYWORDS.iter().find(|k| **k == word) {
                Some(k) => Tok::Kw(k),
                None => Tok::Ident(word),
            };
            tokens.push(Token { tok, span });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                advance(&mut i, &mut line, &mut col);
            }
            let digits: String = chars[start..i].iter().collect();
            let value = digits.parse::<i64>().map_err(|_| SyntaxError {
                line: span.line,
                column: span.column,
                found: format!("integer `{digits}`"),
                expected: vec!["integer within 64-bit range".into()],
            })?;
            tokens.push(Token {
                tok: Tok::Int(value),
                span,
            });
            continue;
        }
        if c == '"' {
            advance(&mut i, &mut line, &mut col);
            let mut text = String::new();
            loop {
                match chars.get(i) {
                    None | Some('\n') => {
                        return Err(SyntaxError {
                            line,
                            column: col,
                            found: "end of line".into(),
                            expected: vec!["`\"`".into()],
                        })
                    }
                    Some('"') => {
                        advance(&mut i, &mut line, &mut col);
                        break;
                    }
                    Some(&ch) => {
                        text.push(ch);
                        advance(&mut i, &mut line, &mut col);
                    }
                }
            }
            tokens.push(Token {
                tok: Tok::Str(text),
                span,
            });
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        match PUNCT.iter().find(|p| rest.starts_with(**p)) {
            Some(p) => {
                for _ in 0..p.len() {
                    advance(&mut i, &mut line, &mut col);
                }
                tokens.push(Token {
                    tok: Tok::Punct(p),
                    span,
                });
            }
            None => {
                return Err(SyntaxError {
                    line,
                    column: col,
                    found: format!("character {c:?}"),
                    expected: vec!["token".into()],
                })
            }
        }
    }
    tokens.push(Token {
        tok: Tok::Eof,
        span: Span { line, column: col },
    });
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, SyntaxError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let idx = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[idx].tok
    }

    fn span(&self) -> Span {
        self.tokens[self.pos].span
    }

    fn bump(&mut self) -> Tok {
        let tok = self.tokens[self.pos].tok.clone();
        if self.pos < self.tokens.len() - 1 {
            self.pos += 1;
        }
        tok
    }

    fn error<T>(&self, expected: &[&str]) -> PResult<T> {
        let span = self.span();
        Err(SyntaxError {
            line: span.line,
            column: span.column,
            found: self.peek().to_string(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Tok::Punct(q) if *q == p)
    }

    fn is_kw(&self, k: &str) -> bool {
        matches!(self.peek(), Tok::Kw(q) if *q == k)
    }

    fn expect_punct(&mut self, p: &'static str) -> PResult<()> {
        if self.is_punct(p) {
            self.bump();
            Ok(())
        } else {
            self.error(&[&format!("`{p}`")])
        }
    }

    fn expect_kw(&mut self, k: &'static str) -> PResult<()> {
        if self.is_kw(k) {
            self.bump();
            Ok(())
        } else {
            self.error(&[&format!("`{k}`")])
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek() {
            Tok::Ident(_) => match self.bump() {
                Tok::Ident(name) => Ok(name),
                _ => unreachable!(),
            },
            _ => self.error(&["identifier"]),
        }
    }

    fn program(&mut self) -> PResult<MiniOoAst> {
        let mut classes = Vec::new();
        while !matches!(self.peek(), Tok::Eof) {
            if !self.is_kw("class") {
                return self.error(&["`class`", "end of input"]);
            }
            classes.push(self.class_decl()?);
        }
        Ok(MiniOoAst { classes })
    }

    fn class_decl(&mut self) -> PResult<ClassDecl> {
        let span = self.span();
        self.expect_kw("class")?;
        let name = self.ident()?;
        let extends = if self.is_kw("extends") {
            self.bump();
            Some(self.ident()?)
        } else {
            None
        };
        self.expect_punct("{")?;
        let mut methods = Vec::new();
        loop {
            match self.peek() {
                Tok::Ident(_) => methods.push(self.method_decl()?),
                Tok::Punct("}") => {
                    self.bump();
                    break;
                }
                _ => return self.error(&["method name", "`}`"]),
            }
        }
        Ok(ClassDecl {
            name,
            extends,
            methods,
            span,
        })
    }

    fn method_decl(&mut self) -> PResult<MethodDecl> {
        let span = self.span();
        let name = self.ident()?;
        self.expect_punct("(")?;
        let mut params = Vec::new();
        if !self.is_punct(")") {
            params.push(self.ident()?);
            while self.is_punct(",") {
                self.bump();
                params.push(self.ident()?);
            }
        }
        self.expect_punct(")")?;
        let body = self.block()?;
        Ok(MethodDecl {
            name,
            params,
            body,
            span,
        })
    }

    fn block(&mut self) -> PResult<Vec<Stmt>> {
        self.expect_punct("{")?;
        let mut stmts = Vec::new();
        while !self.is_punct("}") {
            if matches!(self.peek(), Tok::Eof) {
                return self.error(&["statement", "`}`"]);
            }
            stmts.push(self.stmt()?);
        }
        self.bump();
        Ok(stmts)
    }

    fn stmt(&mut self) -> PResult<Stmt> {
        match self.peek().clone() {
            Tok::Kw("if") => self.if_stmt(),
            Tok::Kw("while") => {
                self.bump();
                self.expect_punct("(")?;
                let cond = self.expr()?;
                self.expect_punct(")")?;
                let body = self.block()?;
                Ok(Stmt::While { cond, body })
            }
            Tok::Kw("for") => self.for_stmt(),
            Tok::Kw("switch") => self.switch_stmt(),
            Tok::Kw("return") => {
                self.bump();
                let value = if self.is_punct(";") {
                    None
                } else {
                    Some(self.expr()?)
                };
                self.expect_punct(";")?;
                Ok(Stmt::Return(value))
            }
            Tok::Punct("{") => Ok(Stmt::Block(self.block()?)),
            Tok::Kw("self") | Tok::Ident(_) => {
                let stmt = self.simple_stmt()?;
                self.expect_punct(";")?;
                Ok(stmt)
            }
            _ => self.error(&[
                "`if`",
                "`while`",
                "`for`",
                "`switch`",
                "`return`",
                "`{`",
                "identifier",
                "`self`",
            ]),
        }
    }

    /// Assignment or call, without the trailing `;`.
    fn simple_stmt(&mut self) -> PResult<Stmt> {
        if let (Tok::Ident(_), Tok::Punct("=")) = (self.peek(), self.peek_at(1)) {
            let target = self.ident()?;
            self.bump();
            let value = self.expr()?;
            return Ok(Stmt::Assign { target, value });
        }
        match self.peek() {
            Tok::Kw("self") | Tok::Ident(_) => Ok(Stmt::Call(self.call()?)),
            _ => self.error(&["identifier", "`self`"]),
        }
    }

    fn if_stmt(&mut self) -> PResult<Stmt> {
        self.expect_kw("if")?;
        self.expect_punct("(")?;
        let cond = self.expr()?;
        self.expect_punct(")")?;
        let then_branch = self.block()?;
        let else_branch = if self.is_kw("else") {
            self.bump();
            if self.is_kw("if") {
                Some(vec![self.if_stmt()?])
            } else {
                Some(self.block()?)
            }
        } else {
            None
        };
        Ok(Stmt::If {
            cond,
            then_branch,
            else_branch,
        })
    }

    fn for_stmt(&mut self) -> PResult<Stmt> {
        self.expect_kw("for")?;
        self.expect_punct("(")?;
        let init = if self.is_punct(";") {
            None
        } else {
            Some(Box::new(self.simple_stmt()?))
        };
        self.expect_punct(";")?;
        let cond = if self.is_punct(";") {
            None
        } else {
            Some(self.expr()?)
        };
        self.expect_punct(";")?;
        let step = if self.is_punct(")") {
            None
        } else {
            Some(Box::new(self.simple_stmt()?))
        };
        self.expect_punct(")")?;
        let body = self.block()?;
        Ok(Stmt::For {
            init,
            cond,
            step,
            body,
        })
    }

    fn switch_stmt(&mut self) -> PResult<Stmt> {
        self.expect_kw("switch")?;
        self.expect_punct("(")?;
        let scrutinee = self.expr()?;
        self.expect_punct(")")?;
        self.expect_punct("{")?;
        let mut arms = Vec::new();
        loop {
            let label = match self.peek() {
                Tok::Kw("case") => {
                    self.bump();
                    ArmLabel::Case(self.literal()?)
                }
                Tok::Kw("default") => {
                    self.bump();
                    ArmLabel::Default
                }
                Tok::Punct("}") if !arms.is_empty() => {
                    self.bump();
                    break;
                }
                _ if arms.is_empty() => return self.error(&["`case`", "`default`"]),
                _ => return self.error(&["`case`", "`default`", "`}`"]),
            };
            self.expect_punct(":")?;
            let body = self.block()?;
            arms.push(SwitchArm { label, body });
        }
        Ok(Stmt::Switch { scrutinee, arms })
    }

    fn literal(&mut self) -> PResult<Literal> {
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(Literal::Int(v))
            }
            Tok::Punct("-") if matches!(self.peek_at(1), Tok::Int(_)) => {
                self.bump();
                match self.bump() {
                    Tok::Int(v) => Ok(Literal::Int(-v)),
                    _ => unreachable!(),
                }
            }
            Tok::Str(s) => {
                self.bump();
                Ok(Literal::Str(s))
            }
            Tok::Kw("true") => {
                self.bump();
                Ok(Literal::Bool(true))
            }
            Tok::Kw("false") => {
                self.bump();
                Ok(Literal::Bool(false))
            }
            _ => self.error(&["literal"]),
        }
    }

    fn call(&mut self) -> PResult<Call> {
        let span = self.span();
        let receiver = match self.peek() {
            Tok::Kw("self") => {
                self.bump();
                Receiver::SelfRef
            }
            Tok::Ident(_) => Receiver::Class(self.ident()?),
            _ => return self.error(&["identifier", "`self`"]),
        };
        self.expect_punct(".")?;
        let method = self.ident()?;
        self.expect_punct("(")?;
        let mut args = Vec::new();
        if !self.is_punct(")") {
            args.push(self.expr()?);
            while self.is_punct(",") {
                self.bump();
                args.push(self.expr()?);
            }
        }
        self.expect_punct(")")?;
        Ok(Call {
            receiver,
            method,
            args,
            span,
        })
    }

    fn expr(&mut self) -> PResult<Expr> {
        self.binary(1)
    }

    fn binary_op(&self) -> Option<BinaryOp> {
        let op = match self.peek() {
            Tok::Punct("||") => BinaryOp::Or,
            Tok::Punct("&&") => BinaryOp::And,
            Tok::Punct("==") => BinaryOp::Eq,
            Tok::Punct("!=") => BinaryOp::Ne,
            Tok::Punct("<") => BinaryOp::Lt,
            Tok::Punct("<=") => BinaryOp::Le,
            Tok::Punct(">") => BinaryOp::Gt,
            Tok::Punct(">=") => BinaryOp::Ge,
            Tok::Punct("+") => BinaryOp::Add,
            Tok::Punct("-") => BinaryOp::Sub,
            Tok::Punct("*") => BinaryOp::Mul,
            Tok::Punct("/") => BinaryOp::Div,
            _ => return None,
        };
        Some(op)
    }

    // Precedence climbing; all binary operators are left-associative.
    fn binary(&mut self, min_prec: u8) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.binary_op() {
            if op.precedence() < min_prec {
                break;
            }
            self.bump();
            let rhs = self.binary(op.precedence() + 1)?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        match self.peek() {
            Tok::Punct("!") => {
                self.bump();
                Ok(Expr::Unary(UnaryOp::Not, Box::new(self.unary()?)))
            }
            Tok::Punct("-") if matches!(self.peek_at(1), Tok::Int(_)) => {
                Ok(Expr::Lit(self.literal()?))
            }
            Tok::Punct("-") => {
                self.bump();
                Ok(Expr::Unary(UnaryOp::Neg, Box::new(self.unary()?)))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> PResult<Expr> {
        match self.peek().clone() {
            Tok::Punct("(") => {
                self.bump();
                let inner = self.expr()?;
                self.expect_punct(")")?;
                Ok(inner)
            }
            Tok::Kw("self") => Ok(Expr::Call(self.call()?)),
            Tok::Ident(_) if matches!(self.peek_at(1), Tok::Punct(".")) => {
                Ok(Expr::Call(self.call()?))
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Expr::Var(name))
            }
            Tok::Int(_) | Tok::Str(_) | Tok::Kw("true") | Tok::Kw("false") => {
                Ok(Expr::Lit(self.literal()?))
            }
            _ => self.error(&["expression"]),
        }
    }
}

/// Parse a MiniOO compilation unit.
pub fn parse_source(text: &str) -> Result<MiniOoAst, SyntaxError> {
    let tokens = lex(text)?;
    let mut parser = Parser { tokens, pos: 0 };
    parser.program()
}
