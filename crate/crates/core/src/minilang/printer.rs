//! Canonical pretty-printer. Re-parsing the output yields an equal AST.

use std::fmt::Write;

use super::ast::*;

pub fn print_source(ast: &MiniOoAst) -> String {
    let mut out = String::new();
    for (i, class) in ast.classes.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str("class ");
        out.push_str(&class.name);
        if let Some(parent) = &class.extends {
            out.push_str(" extends ");
            out.push_str(parent);
        }
        out.push_str(" {\n");
        for method in &class.methods {
            let _ = write!(out, "    {}({}) ", method.name, method.params.join(", "));
            print_block(&method.body, 1, &mut out);
            out.push('\n');
        }
        out.push_str("}\n");
    }
    out
}

fn indent(level: usize, out: &mut String) {
    for _ in 0..level {
        out.push_str("    ");
    }
}

fn print_block(body: &[Stmt], level: usize, out: &mut String) {
    if body.is_empty() {
        out.push_str("{ }");
        return;
    }
    out.push_str("{\n");
    for stmt in body {
        indent(level + 1, out);
        print_stmt(stmt, level + 1, out);
        out.push('\n');
    }
    indent(level, out);
    out.push('}');
}

fn print_simple(stmt: &Stmt, out: &mut String) {
    match stmt {
        Stmt::Assign { target, value } => {
            let _ = write!(out, "{target} = {}", expr_to_string(value));
        }
        Stmt::Call(call) => out.push_str(&call_to_string(call)),
        // The parser only produces assignments and calls in `for` headers.
        other => print_stmt(other, 0, out),
    }
}

fn print_stmt(stmt: &Stmt, level: usize, out: &mut String) {
    match stmt {
        Stmt::If {
            cond,
            then_branch,
            else_branch,
        } => {
            let _ = write!(out, "if ({}) ", expr_to_string(cond));
            print_block(then_branch, level, out);
            if let Some(els) = else_branch {
                out.push_str(" else ");
                print_block(els, level, out);
            }
        }
        Stmt::While { cond, body } => {
            let _ = write!(out, "while ({}) ", expr_to_string(cond));
            print_block(body, level, out);
        }
        Stmt::For {
            init,
            cond,
            step,
            body,
        } => {
            out.push_str("for (");
            if let Some(init) = init {
                print_simple(init, out);
            }
            out.push_str("; ");
            if let Some(cond) = cond {
                out.push_str(&expr_to_string(cond));
            }
            out.push_str("; ");
            if let Some(step) = step {
                print_simple(step, out);
            }
            out.push_str(") ");
            print_block(body, level, out);
        }
        Stmt::Switch { scrutinee, arms } => {
            let _ = writeln!(out, "switch ({}) {{", expr_to_string(scrutinee));
            for arm in arms {
                indent(level + 1, out);
                match &arm.label {
                    ArmLabel::Case(lit) => {
                        let _ = write!(out, "case {}: ", literal_to_string(lit));
                    }
                    ArmLabel::Default => out.push_str("default: "),
                }
                print_block(&arm.body, level + 1, out);
                out.push('\n');
            }
            indent(level, out);
            out.push('}');
        }
        Stmt::Return(None) => out.push_str("return;"),
        Stmt::Return(Some(value)) => {
            let _ = write!(out, "return {};", expr_to_string(value));
        }
        Stmt::Assign { .. } | Stmt::Call(_) => {
            print_simple(stmt, out);
            out.push(';');
        }
        Stmt::Block(body) => print_block(body, level, out),
    }
}

fn literal_to_string(lit: &Literal) -> String {
    match lit {
        Literal::Int(v) => v.to_string(),
        Literal::Str(s) => format!("\"{s}\""),
        Literal::Bool(b) => b.to_string(),
    }
}

fn call_to_string(call: &Call) -> String {
    let receiver = match &call.receiver {
        Receiver::SelfRef => "self",
        Receiver::Class(name) => name.as_str(),
    };
    let args: Vec<String> = call.args.iter().map(expr_to_string).collect();
    format!("{receiver}.{}({})", call.method, args.join(", "))
}

/// Binary operands are always parenthesized so precedence never matters on
/// re-parse.
pub fn expr_to_string(expr: &Expr) -> String {
    match expr {
        Expr::Var(name) => name.clone(),
        Expr::Lit(lit) => literal_to_string(lit),
        Expr::Call(call) => call_to_string(call),
        Expr::Unary(UnaryOp::Not, inner) => format!("!({})", expr_to_string(inner)),
        Expr::Unary(UnaryOp::Neg, inner) => format!("-({})", expr_to_string(inner)),
        Expr::Binary(op, lhs, rhs) => format!(
            "({}) {} ({})",
            expr_to_string(lhs),
            op.symbol(),
            expr_to_string(rhs)
        ),
    }
}
