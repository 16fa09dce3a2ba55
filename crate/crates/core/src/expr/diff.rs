use super::{BinOp, Expr, Func};
use crate::error::{FracError, Result};

pub(super) fn differentiate(e: &Expr) -> Result<Expr> {
    Ok(match e {
        Expr::Const(_) => Expr::Const(0.0),
        Expr::Var => Expr::Const(1.0),
        Expr::Neg(u) => Expr::neg(differentiate(u)?),
        Expr::Binary(op, u, v) => {
            let du = differentiate(u)?;
            let dv = differentiate(v)?;
            let (u, v) = ((**u).clone(), (**v).clone());
            match op {
                BinOp::Add => Expr::add(du, dv),
                BinOp::Sub => Expr::sub(du, dv),
                BinOp::Mul => Expr::add(Expr::mul(du, v.clone()), Expr::mul(u, dv)),
                BinOp::Div => Expr::div(
                    Expr::sub(Expr::mul(du, v.clone()), Expr::mul(u, dv)),
                    Expr::pow(v, Expr::Const(2.0)),
                ),
                BinOp::Pow => power_rule(u, v, du, dv),
            }
        }
        Expr::Call(f, args) => {
            if e.is_constant() {
                return Ok(Expr::Const(0.0));
            }
            let u = args[0].clone();
            match f {
                Func::Exp => Expr::mul(Expr::call(Func::Exp, vec![u.clone()]), differentiate(&u)?),
                Func::Ln => Expr::div(differentiate(&u)?, u),
                Func::Sin => Expr::mul(Expr::call(Func::Cos, vec![u.clone()]), differentiate(&u)?),
                Func::Cos => Expr::neg(Expr::mul(
                    Expr::call(Func::Sin, vec![u.clone()]),
                    differentiate(&u)?,
                )),
                Func::Sqrt => Expr::div(
                    differentiate(&u)?,
                    Expr::mul(Expr::Const(2.0), Expr::call(Func::Sqrt, vec![u])),
                ),
                Func::Pow => {
                    let v = args[1].clone();
                    power_rule(u.clone(), v.clone(), differentiate(&u)?, differentiate(&v)?)
                }
                Func::Gamma | Func::Mlf => {
                    return Err(FracError::NotDifferentiable(format!(
                        "{} applied to a variable argument",
                        f.name()
                    )))
                }
            }
        }
    })
}

fn power_rule(u: Expr, v: Expr, du: Expr, dv: Expr) -> Expr {
    if v.is_constant() {
        // v u^(v-1) u'
        let vm1 = Expr::sub(v.clone(), Expr::Const(1.0));
        return Expr::mul(Expr::mul(v, Expr::pow(u, vm1)), du);
    }
    if u.is_constant() {
        // u^v ln(u) v'
        let ln_u = Expr::call(Func::Ln, vec![u.clone()]);
        return Expr::mul(Expr::mul(Expr::pow(u, v), ln_u), dv);
    }
    // u^v (v' ln u + v u'/u)
    let ln_u = Expr::call(Func::Ln, vec![u.clone()]);
    let inner = Expr::add(
        Expr::mul(dv, ln_u),
        Expr::div(Expr::mul(v.clone(), du), u.clone()),
    );
    Expr::mul(Expr::pow(u, v), inner)
}
