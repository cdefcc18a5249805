use std::fmt;

/// Source position (1-based). Positions are diagnostics only and never take
/// part in AST equality, so a re-parsed pretty-print compares equal.
#[derive(Debug, Clone, Copy, Default, Eq)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

impl PartialEq for Span {
    fn eq(&self, _other: &Self) -> bool {
        true
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MiniOoAst {
    pub classes: Vec<ClassDecl>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDecl {
    pub name: String,
    pub extends: Option<String>,
    pub methods: Vec<MethodDecl>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MethodDecl {
    pub name: String,
    pub params: Vec<String>,
    pub body: Vec<Stmt>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stmt {
    If {
        cond: Expr,
        then_branch: Vec<Stmt>,
        else_branch: Option<Vec<Stmt>>,
    },
    While {
        cond: Expr,
        body: Vec<Stmt>,
    },
    For {
        init: Option<Box<Stmt>>,
        cond: Option<Expr>,
        step: Option<Box<Stmt>>,
        body: Vec<Stmt>,
    },
    Switch {
        scrutinee: Expr,
        arms: Vec<SwitchArm>,
    },
    Return(Option<Expr>),
    Assign {
        target: String,
        value: Expr,
    },
    /// A call evaluated for its effect.
    Call(Call),
    Block(Vec<Stmt>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchArm {
    pub label: ArmLabel,
    pub body: Vec<Stmt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArmLabel {
    Case(Literal),
    Default,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Receiver {
    SelfRef,
    Class(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Call {
    pub receiver: Receiver,
    pub method: String,
    pub args: Vec<Expr>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Literal {
    Int(i64),
    Str(String),
    Bool(bool),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Not,
    Neg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Or,
    And,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Add,
    Sub,
    Mul,
    Div,
}

impl BinaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Or => "||",
            BinaryOp::And => "&&",
            BinaryOp::Eq => "==",
            BinaryOp::Ne => "!=",
            BinaryOp::Lt => "<",
            BinaryOp::Le => "<=",
            BinaryOp::Gt => ">",
            BinaryOp::Ge => ">=",
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
        }
    }

    pub(crate) fn precedence(self) -> u8 {
        match self {
            BinaryOp::Or => 1,
            BinaryOp::And => 2,
            BinaryOp::Eq | BinaryOp::Ne => 3,
            BinaryOp::Lt | BinaryOp::Le | BinaryOp::Gt | BinaryOp::Ge => 4,
            BinaryOp::Add | BinaryOp::Sub => 5,
            BinaryOp::Mul | BinaryOp::Div => 6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Var(String),
    Lit(Literal),
    Call(Call),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
}

impl Stmt {
    /// Calls appearing anywhere in this statement, including nested ones and
    /// those inside conditions.
    pub fn visit_calls<'a>(&'a self, out: &mut Vec<&'a Call>) {
        match self {
            Stmt::If {
                cond,
                then_branch,
                else_branch,
            } => {
                cond.visit_calls(out);
                then_branch.iter().for_each(|s| s.visit_calls(out));
                else_branch
                    .iter()
                    .flatten()
                    .for_each(|s| s.visit_calls(out));
            }
            Stmt::While { cond, body } => {
                cond.visit_calls(out);
                body.iter().for_each(|s| s.visit_calls(out));
            }
            Stmt::For {
                init,
                cond,
                step,
                body,
            } => {
                if let Some(init) = init {
                    init.visit_calls(out);
                }
                if let Some(cond) = cond {
                    cond.visit_calls(out);
                }
                if let Some(step) = step {
                    step.visit_calls(out);
                }
                body.iter().for_each(|s| s.visit_calls(out));
            }
            Stmt::Switch { scrutinee, arms } => {
                scrutinee.visit_calls(out);
                for arm in arms {
                    arm.body.iter().for_each(|s| s.visit_calls(out));
                }
            }
            Stmt::Return(value) => {
                if let Some(value) = value {
                    value.visit_calls(out);
                }
            }
            Stmt::Assign { value, .. } => value.visit_calls(out),
            Stmt::Call(call) => {
                out.push(call);
                call.args.iter().for_each(|a| a.visit_calls(out));
            }
            Stmt::Block(body) => body.iter().for_each(|s| s.visit_calls(out)),
        }
    }
}

impl Expr {
    pub fn visit_calls<'a>(&'a self, out: &mut Vec<&'a Call>) {
        match self {
            Expr::Var(_) | Expr::Lit(_) => {}
            Expr::Call(call) => {
                out.push(call);
                call.args.iter().for_each(|a| a.visit_calls(out));
            }
            Expr::Unary(_, inner) => inner.visit_calls(out),
            Expr::Binary(_, lhs, rhs) => {
                lhs.visit_calls(out);
                rhs.visit_calls(out);
            }
        }
    }
}
