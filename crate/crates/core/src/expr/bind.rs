use super::ast::{BinOp, Expr, ExprKind, Func};
use super::{ExprError, ExprErrorKind};
use crate::field::{FieldMeta, ScalarField};
use crate::scalar::{lit, norm, Real};

/// Evaluates `expr` at `x`. Variable indices must already be in range.
/// Domain errors (`sqrt(-1)`, `log(0)`) produce non-finite values.
pub fn eval_expr<T: Real>(expr: &Expr, x: &[T]) -> T {
    match &expr.kind {
        ExprKind::Num(v) => lit(*v),
        ExprKind::Var(i) => x[*i - 1],
        ExprKind::Vector => norm(x),
        ExprKind::Neg(e) => -eval_expr(e, x),
        ExprKind::Binary(op, a, b) => {
            let (a, b) = (eval_expr(a, x), eval_expr(b, x));
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => a / b,
                BinOp::Pow => a.powf(b),
            }
        }
        ExprKind::Call(func, args) => {
            let mut vals = args.iter().map(|a| eval_expr(a, x));
            match func {
                Func::Norm => match &args[..] {
                    [single] if matches!(single.kind, ExprKind::Vector) => norm(x),
                    _ => vals.map(|v| v * v).sum::<T>().sqrt(),
                },
                Func::Min => vals.fold(T::infinity(), |m, v| {
                    if m.is_nan() || v.is_nan() {
                        T::nan()
                    } else {
                        m.min(v)
                    }
                }),
                Func::Max => vals.fold(T::neg_infinity(), |m, v| {
                    if m.is_nan() || v.is_nan() {
                        T::nan()
                    } else {
                        m.max(v)
                    }
                }),
                unary => {
                    let v = vals.next().unwrap_or_else(T::nan);
                    match unary {
                        Func::Abs => v.abs(),
                        Func::Sqrt => v.sqrt(),
                        Func::Exp => v.exp(),
                        Func::Log => v.ln(),
                        Func::Sin => v.sin(),
                        Func::Cos => v.cos(),
                        Func::Tanh => v.tanh(),
                        Func::Min | Func::Max | Func::Norm => unreachable!(),
                    }
                }
            }
        }
    }
}

/// Binds a parsed expression to dimension `n`, producing a field with no
/// declared properties.
pub fn bind<T: Real>(expr: &Expr, n: usize) -> Result<ScalarField<T>, ExprError> {
    if n == 0 {
        return Err(ExprError::new(ExprErrorKind::IndexOutOfRange, expr.span, "dimension must be positive"));
    }
    let mut bad = None;
    expr.walk(&mut |e| {
        if let ExprKind::Var(i) = e.kind {
            if (i == 0 || i > n) && bad.is_none() {
                bad = Some((i, e.span));
            }
        }
    });
    if let Some((i, span)) = bad {
        let msg = if i == 0 {
            "variable indices start at 1".to_string()
        } else {
            format!("index {i} exceeds dimension {n}")
        };
        return Err(ExprError::new(ExprErrorKind::IndexOutOfRange, span, msg));
    }
    let owned = expr.clone();
    let meta = FieldMeta::named(format!("expr:{expr}"));
    Ok(ScalarField::new(n, meta, move |x: &[T]| eval_expr(&owned, x)))
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn at(src: &str, n: usize, x: &[f64]) -> f64 {
        bind::<f64>(&parse(src).unwrap(), n).unwrap().evaluate(x).unwrap()
    }

    #[test]
    fn spec_examples() {
        assert_eq!(at("norm(x)^2", 2, &[3.0, 4.0]), 25.0);
        assert_eq!(at("tanh(x_1)", 1, &[0.0]), 0.0);
        assert_eq!(at("abs(x_1)", 3, &[-2.0, 5.0, 1.0]), 2.0);
        assert_eq!(at("(sqrt(abs(x_1))+sqrt(abs(x_2)))^2", 2, &[1.0, 1.0]), 4.0);
    }

    #[test]
    fn out_of_range_index_is_rejected() {
        let e = bind::<f64>(&parse("x_3").unwrap(), 2).unwrap_err();
        assert_eq!(e.kind, ExprErrorKind::IndexOutOfRange);
        assert!(e.message.contains("index 3 exceeds dimension 2"));
        assert!(bind::<f64>(&parse("x_0").unwrap(), 2).is_err());
    }

    #[test]
    fn domain_errors_are_non_finite() {
        assert!(at("sqrt(x_1)", 1, &[-1.0]).is_nan());
        assert_eq!(at("log(x_1)", 1, &[0.0]), f64::NEG_INFINITY);
        assert!(at("max(x_1, sqrt(x_1))", 1, &[-1.0]).is_nan());
    }

    #[test]
    fn variadic_calls() {
        assert_eq!(at("norm(x_1, x_2)", 3, &[3.0, 4.0, 100.0]), 5.0);
        assert_eq!(at("min(x_1, x_2, -1)", 2, &[3.0, 4.0]), -1.0);
        assert_eq!(at("max(x_1)", 1, &[3.0]), 3.0);
    }

    #[test]
    fn binds_in_single_precision() {
        let f = bind::<f32>(&parse("x_1*x_2").unwrap(), 2).unwrap();
        assert_eq!(f.evaluate(&[1.5, 2.0]).unwrap(), 3.0f32);
    }
}
