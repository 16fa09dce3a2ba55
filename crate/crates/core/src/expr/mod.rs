//! Real-valued expressions in one variable.
//!
//! The grammar accepts numbers, the variable (`x` or `t`), the constants
//! `pi` and `e`, the binary operators `+ - * / ^`, unary minus, and the
//! functions `exp ln sin cos sqrt pow gamma mlf`. `mlf(a, z)` is the
//! one-parameter Mittag-Leffler function E_a(z).

mod diff;
mod parser;

use crate::error::{FracError, Result};
use crate::specialfn::{gamma, mittag_leffler, MLParams};
use std::fmt;

pub use parser::{parse, MAX_INPUT_BYTES};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Ln,
    Sin,
    Cos,
    Sqrt,
    Pow,
    Gamma,
    Mlf,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
            Func::Pow => "pow",
            Func::Gamma => "gamma",
            Func::Mlf => "mlf",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sqrt" => Func::Sqrt,
            "pow" => Func::Pow,
            "gamma" => Func::Gamma,
            "mlf" => Func::Mlf,
            _ => return None,
        })
    }

    pub fn arity(self) -> usize {
        match self {
            Func::Pow | Func::Mlf => 2,
            _ => 1,
        }
    }
}

/// Expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

fn pow_real(base: f64, exponent: f64) -> Result<f64> {
    if base < 0.0 && exponent != exponent.trunc() {
        return Err(FracError::domain("pow", base));
    }
    if base == 0.0 && exponent < 0.0 {
        return Err(FracError::domain("pow", base));
    }
    Ok(base.powf(exponent))
}

impl Expr {
    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    pub fn var() -> Expr {
        Expr::Var
    }

    /// True if the expression does not depend on the variable.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Const(_) => true,
            Expr::Var => false,
            Expr::Neg(e) => e.is_constant(),
            Expr::Binary(_, l, r) => l.is_constant() && r.is_constant(),
            Expr::Call(_, args) => args.iter().all(Expr::is_constant),
        }
    }

    pub fn as_const(&self) -> Option<f64> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }

    /// Evaluates at `x`. Out-of-domain arguments are errors rather than NaN.
    pub fn eval(&self, x: f64) -> Result<f64> {
        match self {
            Expr::Const(c) => Ok(*c),
            Expr::Var => Ok(x),
            Expr::Neg(e) => Ok(-e.eval(x)?),
            Expr::Binary(op, l, r) => {
                let a = l.eval(x)?;
                let b = r.eval(x)?;
                match op {
                    BinOp::Add => Ok(a + b),
                    BinOp::Sub => Ok(a - b),
                    BinOp::Mul => Ok(a * b),
                    BinOp::Div => {
                        if b == 0.0 {
                            Err(FracError::domain("division", a))
                        } else {
                            Ok(a / b)
                        }
                    }
                    BinOp::Pow => pow_real(a, b),
                }
            }
            Expr::Call(f, args) => {
                let a = args[0].eval(x)?;
                match f {
                    Func::Exp => Ok(a.exp()),
                    Func::Ln => {
                        if a > 0.0 {
                            Ok(a.ln())
                        } else {
                            Err(FracError::domain("ln", a))
                        }
                    }
                    Func::Sin => Ok(a.sin()),
                    Func::Cos => Ok(a.cos()),
                    Func::Sqrt => {
                        if a >= 0.0 {
                            Ok(a.sqrt())
                        } else {
                            Err(FracError::domain("sqrt", a))
                        }
                    }
                    Func::Pow => pow_real(a, args[1].eval(x)?),
                    Func::Gamma => gamma(a),
                    Func::Mlf => {
                        let z = args[1].eval(x)?;
                        mittag_leffler(MLParams::one(a)?, z)
                    }
                }
            }
        }
    }

    /// Symbolic derivative with respect to the variable.
    pub fn differentiate(&self) -> Result<Expr> {
        diff::differentiate(self)
    }

    // Constructors that fold constants and drop 0/1 identities.

    pub fn neg(e: Expr) -> Expr {
        match e {
            Expr::Const(c) => Expr::Const(-c),
            Expr::Neg(inner) => *inner,
            other => Expr::Neg(Box::new(other)),
        }
    }

    pub fn add(l: Expr, r: Expr) -> Expr {
        match (&l, &r) {
            (Expr::Const(a), Expr::Const(b)) => fold(a + b).unwrap_or_else(|| bin(BinOp::Add, l, r)),
            (Expr::Const(a), _) if *a == 0.0 => r,
            (_, Expr::Const(b)) if *b == 0.0 => l,
            _ => bin(BinOp::Add, l, r),
        }
    }

    pub fn sub(l: Expr, r: Expr) -> Expr {
        match (&l, &r) {
            (Expr::Const(a), Expr::Const(b)) => fold(a - b).unwrap_or_else(|| bin(BinOp::Sub, l, r)),
            (Expr::Const(a), _) if *a == 0.0 => Expr::neg(r),
            (_, Expr::Const(b)) if *b == 0.0 => l,
            _ => bin(BinOp::Sub, l, r),
        }
    }

    pub fn mul(l: Expr, r: Expr) -> Expr {
        match (&l, &r) {
            (Expr::Const(a), Expr::Const(b)) => fold(a * b).unwrap_or_else(|| bin(BinOp::Mul, l, r)),
            (Expr::Const(a), _) | (_, Expr::Const(a)) if *a == 0.0 => Expr::Const(0.0),
            (Expr::Const(a), _) if *a == 1.0 => r,
            (_, Expr::Const(b)) if *b == 1.0 => l,
            (Expr::Const(a), _) if *a == -1.0 => Expr::neg(r),
            (_, Expr::Const(b)) if *b == -1.0 => Expr::neg(l),
            _ => bin(BinOp::Mul, l, r),
        }
    }

    pub fn div(l: Expr, r: Expr) -> Expr {
        match (&l, &r) {
            (Expr::Const(a), Expr::Const(b)) if *b != 0.0 => {
                fold(a / b).unwrap_or_else(|| bin(BinOp::Div, l, r))
            }
            (Expr::Const(a), _) if *a == 0.0 => Expr::Const(0.0),
            (_, Expr::Const(b)) if *b == 1.0 => l,
            _ => bin(BinOp::Div, l, r),
        }
    }

    pub fn pow(l: Expr, r: Expr) -> Expr {
        match (&l, &r) {
            (Expr::Const(a), Expr::Const(b)) => match pow_real(*a, *b) {
                Ok(v) => fold(v).unwrap_or_else(|| bin(BinOp::Pow, l, r)),
                Err(_) => bin(BinOp::Pow, l, r),
            },
            (_, Expr::Const(b)) if *b == 0.0 => Expr::Const(1.0),
            (_, Expr::Const(b)) if *b == 1.0 => l,
            (Expr::Const(a), _) if *a == 1.0 => Expr::Const(1.0),
            _ => bin(BinOp::Pow, l, r),
        }
    }

    pub fn call(f: Func, args: Vec<Expr>) -> Expr {
        if args.iter().all(|a| matches!(a, Expr::Const(_))) {
            let node = Expr::Call(f, args);
            if let Ok(v) = node.eval(0.0) {
                if let Some(c) = fold(v) {
                    return c;
                }
            }
            return node;
        }
        Expr::Call(f, args)
    }
}

fn bin(op: BinOp, l: Expr, r: Expr) -> Expr {
    Expr::Binary(op, Box::new(l), Box::new(r))
}

fn fold(v: f64) -> Option<Expr> {
    v.is_finite().then_some(Expr::Const(v))
}

/// Fully parenthesised form that parses back to an equivalent tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => {
                if c.is_sign_negative() {
                    write!(f, "(-{:?})", -c)
                } else {
                    write!(f, "{c:?}")
                }
            }
            Expr::Var => write!(f, "x"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Binary(op, l, r) => write!(f, "({l} {} {r})", op.symbol()),
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl std::str::FromStr for Expr {
    type Err = FracError;

    fn from_str(s: &str) -> Result<Expr> {
        parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str, x: f64) -> f64 {
        parse(s).unwrap().eval(x).unwrap()
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(ev("-2^2", 0.0), -4.0);
        assert_eq!(ev("2^3^2", 0.0), 512.0);
        assert_eq!(ev("1 - 2 - 3", 0.0), -4.0);
        assert_eq!(ev("12 / 3 / 2", 0.0), 2.0);
        assert_eq!(ev("2 + 3 * 4", 0.0), 14.0);
        assert_eq!(ev("(2 + 3) * 4", 0.0), 20.0);
        assert_eq!(ev("2^-1", 0.0), 0.5);
        assert_eq!(ev("-x^2", 3.0), -9.0);
        assert_eq!(ev("--x", 3.0), 3.0);
        assert_eq!(ev("2*-x", 3.0), -6.0);
    }

    #[test]
    fn functions_and_constants() {
        assert!((ev("exp(1) - e", 0.0)).abs() < 1e-15);
        assert!((ev("sin(pi/2)", 0.0) - 1.0).abs() < 1e-15);
        assert!((ev("gamma(0.5)^2 - pi", 0.0)).abs() < 1e-13);
        assert!((ev("mlf(1, x) - exp(x)", 0.7)).abs() < 1e-13);
        assert!((ev("pow(t, 2.5)", 4.0) - 32.0).abs() < 1e-12);
        assert!((ev("sqrt(x) * ln(x)", 4.0) - 2.0 * 4f64.ln()).abs() < 1e-15);
        assert_eq!(ev("1e-3 * 2E+2", 0.0), 0.2);
    }

    #[test]
    fn domain_errors() {
        for (s, x) in [("ln(x)", 0.0), ("sqrt(x)", -1.0), ("1/x", 0.0), ("x^0.5", -2.0), ("gamma(x)", -1.0)] {
            assert!(parse(s).unwrap().eval(x).is_err(), "{s} at {x}");
        }
        assert_eq!(ev("x^2", -3.0), 9.0);
    }

    #[test]
    fn parse_error_positions() {
        let err = parse("1 + * 2").unwrap_err();
        assert_eq!(err.to_string(), "parse error at byte 4: unexpected `*`");
        let err = parse("sin(x").unwrap_err();
        assert_eq!(err.to_string(), "parse error at byte 5: expected `)`, found end of input");
        let err = parse("foo(x)").unwrap_err();
        assert_eq!(
            err,
            FracError::UnknownIdentifier {
                offset: 0,
                name: "foo".into()
            }
        );
        assert_eq!(err.to_string(), "parse error at byte 0: unknown identifier `foo`");
        assert!(matches!(parse("2 $ 3"), Err(FracError::Parse { offset: 2, .. })));
        assert!(matches!(parse("pow(x)"), Err(FracError::Parse { .. })));
        assert!(matches!(parse(""), Err(FracError::Parse { offset: 0, .. })));
        assert!(matches!(parse("(1))"), Err(FracError::Parse { offset: 3, .. })));
    }

    #[test]
    fn input_limits() {
        let long = "1".repeat(MAX_INPUT_BYTES + 1);
        assert!(matches!(parse(&long), Err(FracError::Parse { .. })));
        let deep = format!("{}x{}", "(".repeat(5000), ")".repeat(5000));
        assert!(parse(&deep).is_err());
        let chain = vec!["x"; 3000].join("+");
        assert!(parse(&chain).is_err());
        let ok = vec!["x"; 200].join("+");
        assert_eq!(parse(&ok).unwrap().eval(1.0).unwrap(), 200.0);
    }

    #[test]
    fn display_round_trips() {
        for s in ["-2^2", "x^-0.5 * exp(-x)", "mlf(0.5, -x^0.5)", "1/(1 + x^2) - 3.25e-7", "gamma(x + 1)"] {
            let e = parse(s).unwrap();
            let printed = e.to_string();
            let again = parse(&printed).unwrap();
            assert_eq!(again.to_string(), printed);
            for x in [0.3, 1.1, 2.7] {
                assert_eq!(e.eval(x).unwrap(), again.eval(x).unwrap(), "{s}");
            }
        }
    }

    #[test]
    fn constant_folding() {
        assert_eq!(parse("2 * 3 + 1").unwrap(), Expr::Binary(
            BinOp::Add,
            Box::new(Expr::Binary(BinOp::Mul, Box::new(Expr::Const(2.0)), Box::new(Expr::Const(3.0)))),
            Box::new(Expr::Const(1.0)),
        ));
        assert_eq!(Expr::add(Expr::Const(2.0), Expr::Const(3.0)), Expr::Const(5.0));
        assert_eq!(Expr::mul(Expr::Const(0.0), Expr::Var), Expr::Const(0.0));
        assert_eq!(Expr::pow(Expr::Var, Expr::Const(1.0)), Expr::Var);
        assert_eq!(Expr::call(Func::Sqrt, vec![Expr::Const(4.0)]), Expr::Const(2.0));
    }
}
