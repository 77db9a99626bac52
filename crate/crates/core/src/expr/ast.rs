use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Ln,
    Sin,
    Cos,
    Tan,
    Abs,
    Sqrt,
    Cbrt,
}

impl Func {
    pub const ALL: [Func; 8] = [
        Func::Exp,
        Func::Ln,
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Abs,
        Func::Sqrt,
        Func::Cbrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Abs => "abs",
            Func::Sqrt => "sqrt",
            Func::Cbrt => "cbrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    fn apply(self, v: f64, x: f64) -> Result<f64> {
        match self {
            Func::Exp => Ok(v.exp()),
            Func::Ln if v <= 0.0 => Err(Error::eval(x, format!("ln of non-positive value {v}"))),
            Func::Ln => Ok(v.ln()),
            Func::Sin => Ok(v.sin()),
            Func::Cos => Ok(v.cos()),
            Func::Tan => Ok(v.tan()),
            Func::Abs => Ok(v.abs()),
            Func::Sqrt if v < 0.0 => Err(Error::eval(x, format!("sqrt of negative value {v}"))),
            Func::Sqrt => Ok(v.sqrt()),
            Func::Cbrt => Ok(v.cbrt()),
        }
    }
}

/// Built-in transcendental constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedConst {
    E,
    Pi,
}

impl NamedConst {
    pub fn value(self) -> f64 {
        match self {
            NamedConst::E => std::f64::consts::E,
            NamedConst::Pi => std::f64::consts::PI,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NamedConst::E => "e",
            NamedConst::Pi => "pi",
        }
    }
}

/// Exponent `num/den` in lowest terms with `den >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    pub num: i64,
    pub den: i64,
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Option<Rational> {
        Self::reduce(num as i128, den as i128)
    }

    fn reduce(mut num: i128, mut den: i128) -> Option<Rational> {
        if den == 0 {
            return None;
        }
        if den < 0 {
            num = -num;
            den = -den;
        }
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()).max(1) as i128;
        Some(Rational {
            num: i64::try_from(num / g).ok()?,
            den: i64::try_from(den / g).ok()?,
        })
    }

    /// Exact value of a decimal literal such as `2`, `0.5` or `1.25e-2`.
    pub fn from_decimal(text: &str) -> Option<Rational> {
        let (mantissa, exp) = match text.find(['e', 'E']) {
            Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
            None => (text, 0),
        };
        let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
        let digits = format!("{int_part}{frac_part}");
        let digits = digits.trim_start_matches('0');
        let scale = frac_part.len() as i32 - exp;
        if digits.len() > 30 || scale.abs() > 30 {
            return None;
        }
        let mut num: i128 = if digits.is_empty() {
            0
        } else {
            digits.parse().ok()?
        };
        let mut den: i128 = 1;
        if scale >= 0 {
            den = 10i128.pow(scale as u32);
        } else {
            num = num.checked_mul(10i128.pow((-scale) as u32))?;
        }
        Self::reduce(num, den)
    }

    pub fn checked_div(self, rhs: Rational) -> Option<Rational> {
        Self::reduce(
            self.num as i128 * rhs.den as i128,
            self.den as i128 * rhs.num as i128,
        )
    }

    pub fn checked_neg(self) -> Option<Rational> {
        Some(Rational {
            num: self.num.checked_neg()?,
            den: self.den,
        })
    }

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Closed-form real function of the single variable `x`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Named(NamedConst),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// `rational` is set when the exponent was written as a literal number or
    /// literal quotient; such powers take the real root of negative bases.
    Pow {
        base: Box<Expr>,
        exponent: Box<Expr>,
        rational: Option<Rational>,
    },
    Call(Func, Box<Expr>),
}

impl Expr {
    /// Tokenizes and parses `source`.
    pub fn parse(source: &str) -> Result<Expr> {
        super::parse(&super::tokenize(source)?)
    }

    /// Evaluates at `x`, which must lie in `[0, 1]`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::OutOfDomain(x));
        }
        self.eval_at(x)
    }

    fn eval_at(&self, x: f64) -> Result<f64> {
        let v = match self {
            Expr::Const(c) => *c,
            Expr::Named(n) => n.value(),
            Expr::Var => x,
            Expr::Neg(a) => -a.eval_at(x)?,
            Expr::Add(a, b) => a.eval_at(x)? + b.eval_at(x)?,
            Expr::Sub(a, b) => a.eval_at(x)? - b.eval_at(x)?,
            Expr::Mul(a, b) => a.eval_at(x)? * b.eval_at(x)?,
            Expr::Div(a, b) => {
                let num = a.eval_at(x)?;
                let den = b.eval_at(x)?;
                if den == 0.0 {
                    return Err(Error::eval(x, "division by zero"));
                }
                num / den
            }
            Expr::Pow {
                base,
                exponent,
                rational,
            } => {
                let b = base.eval_at(x)?;
                match rational {
                    Some(r) => pow_rational(b, *r, x)?,
                    None => {
                        let p = exponent.eval_at(x)?;
                        if b < 0.0 {
                            return Err(Error::eval(
                                x,
                                format!("negative base {b} with non-literal exponent {p}"),
                            ));
                        }
                        b.powf(p)
                    }
                }
            }
            Expr::Call(f, a) => f.apply(a.eval_at(x)?, x)?,
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::eval(x, "non-finite result"))
        }
    }

    /// True when the expression does not depend on `x`.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Named(_) => true,
            Expr::Var => false,
            Expr::Neg(a) | Expr::Call(_, a) => a.is_constant(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.is_constant() && b.is_constant()
            }
            Expr::Pow { base, exponent, .. } => base.is_constant() && exponent.is_constant(),
        }
    }

    /// Coefficients `(slope, intercept)` when the expression is affine in `x`.
    pub fn as_affine(&self) -> Option<(f64, f64)> {
        if self.is_constant() {
            return self.eval_at(0.0).ok().map(|c| (0.0, c));
        }
        match self {
            Expr::Var => Some((1.0, 0.0)),
            Expr::Neg(a) => a.as_affine().map(|(m, c)| (-m, -c)),
            Expr::Add(a, b) => {
                let (m1, c1) = a.as_affine()?;
                let (m2, c2) = b.as_affine()?;
                Some((m1 + m2, c1 + c2))
            }
            Expr::Sub(a, b) => {
                let (m1, c1) = a.as_affine()?;
                let (m2, c2) = b.as_affine()?;
                Some((m1 - m2, c1 - c2))
            }
            Expr::Mul(a, b) => {
                let (m1, c1) = a.as_affine()?;
                let (m2, c2) = b.as_affine()?;
                match (m1 == 0.0, m2 == 0.0) {
                    (true, _) => Some((c1 * m2, c1 * c2)),
                    (_, true) => Some((m1 * c2, c1 * c2)),
                    _ => None,
                }
            }
            Expr::Div(a, b) => {
                let (m1, c1) = a.as_affine()?;
                let (m2, c2) = b.as_affine()?;
                (m2 == 0.0 && c2 != 0.0).then(|| (m1 / c2, c1 / c2))
            }
            _ => None,
        }
    }

    /// Interior roots of affine arguments under `abs(.)` or under a power with a
    /// literal-rational exponent, sorted and deduplicated.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = Vec::new();
        self.collect_breakpoints(&mut out);
        crate::function::normalize_breakpoints(out)
    }

    fn collect_breakpoints(&self, out: &mut Vec<f64>) {
        let kink_arg = match self {
            Expr::Call(Func::Abs, arg) => Some(arg),
            Expr::Pow {
                base,
                rational: Some(_),
                ..
            } => Some(base),
            _ => None,
        };
        if let Some((m, c)) = kink_arg.and_then(|a| a.as_affine()) {
            if m != 0.0 {
                let root = -c / m;
                if root > 0.0 && root < 1.0 {
                    out.push(root);
                }
            }
        }
        match self {
            Expr::Const(_) | Expr::Named(_) | Expr::Var => {}
            Expr::Neg(a) | Expr::Call(_, a) => a.collect_breakpoints(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_breakpoints(out);
                b.collect_breakpoints(out);
            }
            Expr::Pow { base, exponent, .. } => {
                base.collect_breakpoints(out);
                exponent.collect_breakpoints(out);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow { .. } => 4,
            Expr::Const(c) if *c < 0.0 => 3,
            _ => 5,
        }
    }
}

// Signed real root: sign(b)^p * |b|^(p/q) when q is odd, principal root otherwise.
fn pow_rational(b: f64, r: Rational, x: f64) -> Result<f64> {
    if r.den == 1 {
        return Ok(match i32::try_from(r.num) {
            Ok(p) => b.powi(p),
            Err(_) => b.powf(r.num as f64),
        });
    }
    if r.den % 2 == 0 {
        if b < 0.0 {
            return Err(Error::eval(
                x,
                format!("negative base {b} under even root {}/{}", r.num, r.den),
            ));
        }
        return Ok(b.powf(r.value()));
    }
    let magnitude = b.abs().powf(r.value());
    Ok(if b < 0.0 && r.num % 2 != 0 {
        -magnitude
    } else {
        magnitude
    })
}

struct Wrapped<'e>(&'e Expr, u8);

impl fmt::Display for Wrapped<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.precedence() < self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Prints with the minimal parentheses that re-parse to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Named(n) => f.write_str(n.name()),
            Expr::Var => f.write_str("x"),
            Expr::Neg(a) => write!(f, "-{}", Wrapped(a, 3)),
            Expr::Add(a, b) => write!(f, "{} + {}", Wrapped(a, 1), Wrapped(b, 2)),
            Expr::Sub(a, b) => write!(f, "{} - {}", Wrapped(a, 1), Wrapped(b, 2)),
            Expr::Mul(a, b) => write!(f, "{}*{}", Wrapped(a, 2), Wrapped(b, 3)),
            Expr::Div(a, b) => write!(f, "{}/{}", Wrapped(a, 2), Wrapped(b, 3)),
            Expr::Pow { base, exponent, .. } => {
                write!(f, "{}^{}", Wrapped(base, 5), Wrapped(exponent, 3))
            }
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(src: &str, x: f64) -> Result<f64> {
        Expr::parse(src)?.eval(x)
    }

    #[test]
    fn real_root_of_negative_base() {
        let got = eval("(x-1/2)^(2/3)", 0.0).unwrap();
        // direct powering of the magnitude
        let expected = 0.5f64.powf(2.0 / 3.0);
        assert!((got - expected).abs() < 1e-15);
        assert!((got - 0.629_960_524_947_436_6).abs() < 1e-15);
        assert!((eval("(x-1/2)^(1/3)", 0.0).unwrap() + 0.5f64.cbrt()).abs() < 1e-15);
    }

    #[test]
    fn abs_and_square_root() {
        assert_eq!(eval("abs(x-1/2)", 0.75).unwrap(), 0.25);
        assert_eq!(eval("x^0.5", 0.25).unwrap(), 0.5);
        assert!(matches!(eval("(x-1)^0.5", 0.25), Err(Error::Eval { .. })));
        assert!(matches!(eval("(x-1)^x", 0.25), Err(Error::Eval { .. })));
    }

    #[test]
    fn evaluation_errors() {
        assert!(matches!(eval("1/(x-1/2)", 0.5), Err(Error::Eval { .. })));
        assert!(matches!(eval("ln(x)", 0.0), Err(Error::Eval { .. })));
        assert!(matches!(eval("sqrt(x-1)", 0.5), Err(Error::Eval { .. })));
        assert!(matches!(eval("exp(1000*x)", 1.0), Err(Error::Eval { .. })));
        assert!(matches!(eval("x", 1.5), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn constants_and_functions() {
        let v = eval("e^x + cos(pi*x) + tan(0) + cbrt(-8) + sqrt(4)", 1.0).unwrap();
        assert!((v - (std::f64::consts::E - 1.0 - 2.0 + 2.0)).abs() < 1e-15);
        assert_eq!(eval("-x^2", 0.5).unwrap(), -0.25);
        assert_eq!(eval("2^-1", 0.0).unwrap(), 0.5);
    }

    #[test]
    fn breakpoints_of_kinked_forms() {
        let bp = |s: &str| Expr::parse(s).unwrap().breakpoints();
        assert_eq!(bp("abs(x-1/2)"), vec![0.5]);
        assert_eq!(bp("(x-1/2)^(2/3)"), vec![0.5]);
        assert!(bp("exp(2*x)").is_empty());
        assert_eq!(bp("abs(2*x - 0.5) + abs((x - 0.75)/2)"), vec![0.25, 0.75]);
        assert_eq!(bp("abs(x-1/2) + abs(1/2-x)"), vec![0.5]);
        // not affine: nothing detected
        assert!(bp("abs(x^2-1/4)").is_empty());
        // root outside (0,1)
        assert!(bp("abs(x+1)").is_empty());
    }

    #[test]
    fn rational_reduction() {
        assert_eq!(Rational::from_decimal("0.5"), Rational::new(1, 2));
        assert_eq!(Rational::from_decimal("2.50"), Rational::new(5, 2));
        assert_eq!(Rational::from_decimal("125e-3"), Rational::new(1, 8));
        assert_eq!(Rational::from_decimal("3E2"), Rational::new(300, 1));
        assert_eq!(Rational::new(4, -6), Some(Rational { num: -2, den: 3 }));
        assert_eq!(Rational::new(1, 0), None);
    }

    #[test]
    fn display_round_trips() {
        for src in [
            "-x^2",
            "(x-1/2)^(2/3)",
            "x^-(1/3)",
            "a",
            "(-x)^2",
            "x - (1 - x)",
            "2/(3*x+1)",
            "--x",
            "x^2^3",
            "(x^2)^3",
            "exp(-2*x)*cos(pi*x)",
            "abs(x - 0.37)^0.5",
        ] {
            let Ok(e) = Expr::parse(src) else { continue };
            let printed = e.to_string();
            assert_eq!(Expr::parse(&printed).unwrap(), e, "{src} -> {printed}");
        }
    }
}
