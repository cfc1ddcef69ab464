//! Square systems of multivariate polynomials with exact rational
//! coefficients: parsing, canonical printing, exact evaluation, derivatives
//! and the analytic gradient of the squared-residual sum F = Σᵢ fᵢ².
//!
//! This module is the reference semantics for the whole crate. Everything the
//! simulator computes in fixed point or floating point is ultimately checked
//! against the exact rational values produced here.

use crate::rational::{parse_decimal, to_exact_decimal};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

/// One monomial: an exact coefficient times a product of variable powers.
///
/// `exponents.len()` always equals the owning system's variable count; zero
/// coefficients are dropped at construction time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coefficient: BigRational,
    pub exponents: Vec<u32>,
}

impl Term {
    pub fn total_degree(&self) -> u32 {
        self.exponents.iter().sum()
    }
}

/// A polynomial is a sum of terms over a fixed variable count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    n_vars: usize,
    terms: Vec<Term>,
}

impl Polynomial {
    /// Build from raw terms: pads/validates exponent lengths, merges duplicate
    /// monomials, drops zero coefficients and sorts into graded-lex order
    /// (highest total degree first, then lexicographically larger exponent
    /// vector first).
    pub fn new(n_vars: usize, terms: Vec<Term>) -> Result<Self, SystemError> {
        let mut merged: Vec<Term> = Vec::new();
        for t in terms {
            if t.exponents.len() != n_vars {
                return Err(SystemError::ExponentArity {
                    expected: n_vars,
                    found: t.exponents.len(),
                });
            }
            match merged.iter_mut().find(|m| m.exponents == t.exponents) {
                Some(m) => m.coefficient += &t.coefficient,
                None => merged.push(t),
            }
        }
        merged.retain(|t| !t.coefficient.is_zero());
        merged.sort_by(|a, b| graded_lex(b, a));
        Ok(Self { n_vars, terms: merged })
    }

    pub fn zero(n_vars: usize) -> Self {
        Self { n_vars, terms: Vec::new() }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.iter().map(Term::total_degree).max().unwrap_or(0)
    }

    /// Exact value at a rational point.
    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.n_vars, "point arity mismatch");
        let mut acc = BigRational::zero();
        for t in &self.terms {
            let mut v = t.coefficient.clone();
            for (x, &e) in point.iter().zip(&t.exponents) {
                for _ in 0..e {
                    v *= x;
                }
            }
            acc += v;
        }
        acc
    }

    /// Floating-point value; used only where phases or step sizes are
    /// inherently floating point.
    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        let mut acc = 0.0;
        for t in &self.terms {
            let mut v = crate::rational::to_f64(&t.coefficient);
            for (x, &e) in point.iter().zip(&t.exponents) {
                v *= x.powi(e as i32);
            }
            acc += v;
        }
        acc
    }

    /// Partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|t| t.exponents[var] > 0)
            .map(|t| {
                let mut e = t.exponents.clone();
                let k = e[var];
                e[var] -= 1;
                Term {
                    coefficient: &t.coefficient * BigRational::from_integer(BigInt::from(k)),
                    exponents: e,
                }
            })
            .collect();
        Polynomial::new(self.n_vars, terms).expect("derivative keeps arity")
    }
}

fn graded_lex(a: &Term, b: &Term) -> Ordering {
    a.total_degree()
        .cmp(&b.total_degree())
        .then_with(|| a.exponents.cmp(&b.exponents))
}

/// A square system of `n` polynomials in `n` variables, each interpreted as
/// fᵢ(x₀,…,x_{n−1}) = 0 with any right-hand side already folded in.
///
/// `h` (max total degree) and `t` (max term count) are recomputed from the
/// data, never trusted from input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialSystem {
    n: usize,
    equations: Vec<Polynomial>,
    h: u32,
    t: usize,
}

impl PolynomialSystem {
    pub fn new(equations: Vec<Polynomial>) -> Result<Self, SystemError> {
        let n = equations.len();
        if n == 0 {
            return Err(SystemError::Empty);
        }
        for eq in &equations {
            if eq.n_vars() != n {
                return Err(SystemError::NotSquare {
                    equations: n,
                    variables: eq.n_vars(),
                });
            }
        }
        let h = equations.iter().map(Polynomial::max_degree).max().unwrap_or(0);
        let t = equations.iter().map(Polynomial::term_count).max().unwrap_or(0);
        Ok(Self { n, equations, h, t })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn equations(&self) -> &[Polynomial] {
        &self.equations
    }

    pub fn equation(&self, i: usize) -> Result<&Polynomial, SystemError> {
        self.equations.get(i).ok_or(SystemError::EquationIndex { index: i, count: self.n })
    }

    /// (h, t): max total degree over all terms, max term count over all
    /// equations (the folded constant counts as a term).
    pub fn degree_stats(&self) -> (u32, usize) {
        (self.h, self.t)
    }

    /// Exact value of fᵢ at a rational point.
    pub fn evaluate(&self, eq_index: usize, point: &[BigRational]) -> Result<BigRational, SystemError> {
        if point.len() != self.n {
            return Err(SystemError::PointArity { expected: self.n, found: point.len() });
        }
        Ok(self.equation(eq_index)?.eval(point))
    }

    /// Exact F = Σᵢ fᵢ² at a rational point.
    pub fn sum_of_squares(&self, point: &[BigRational]) -> BigRational {
        self.equations
            .iter()
            .map(|eq| {
                let v = eq.eval(point);
                &v * &v
            })
            .sum()
    }

    /// Floating-point F = Σᵢ fᵢ².
    pub fn sum_of_squares_f64(&self, point: &[f64]) -> f64 {
        self.equations
            .iter()
            .map(|eq| {
                let v = eq.eval_f64(point);
                v * v
            })
            .sum()
    }

    /// Exact analytic gradient of F: ∂F/∂xⱼ = 2·Σᵢ fᵢ·∂fᵢ/∂xⱼ.
    pub fn grad_sum_of_squares(&self, point: &[BigRational]) -> Result<Vec<BigRational>, SystemError> {
        if point.len() != self.n {
            return Err(SystemError::PointArity { expected: self.n, found: point.len() });
        }
        let values: Vec<BigRational> = self.equations.iter().map(|eq| eq.eval(point)).collect();
        let two = BigRational::from_integer(BigInt::from(2));
        let mut grad = Vec::with_capacity(self.n);
        for j in 0..self.n {
            let mut acc = BigRational::zero();
            for (eq, f) in self.equations.iter().zip(&values) {
                acc += f * eq.derivative(j).eval(point);
            }
            grad.push(&two * acc);
        }
        Ok(grad)
    }

    /// Jacobian entries ∂fᵢ/∂xⱼ evaluated in floating point; used by the
    /// Newton baseline.
    pub fn jacobian_f64(&self, point: &[f64]) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.equations[i].derivative(j).eval_f64(point))
                    .collect()
            })
            .collect()
    }

    /// Canonical text form: one `<polynomial> = 0` line per equation, terms in
    /// graded-lex order. Fails if a coefficient has no finite decimal
    /// expansion (the input grammar cannot express it).
    pub fn print_canonical(&self) -> Result<String, SystemError> {
        let mut out = String::new();
        for eq in &self.equations {
            if eq.terms.is_empty() {
                out.push_str("0 = 0\n");
                continue;
            }
            let mut line = String::new();
            for (k, term) in eq.terms.iter().enumerate() {
                let coeff = &term.coefficient;
                let mag = coeff.abs();
                if k == 0 {
                    if coeff.is_negative() {
                        line.push('-');
                    }
                } else if coeff.is_negative() {
                    line.push_str(" - ");
                } else {
                    line.push_str(" + ");
                }
                let is_const = term.exponents.iter().all(|&e| e == 0);
                let coeff_str = to_exact_decimal(&mag)
                    .ok_or_else(|| SystemError::Unprintable { coefficient: coeff.to_string() })?;
                let mut factors: Vec<String> = Vec::new();
                if !mag.is_one() || is_const {
                    factors.push(coeff_str);
                }
                for (j, &e) in term.exponents.iter().enumerate() {
                    match e {
                        0 => {}
                        1 => factors.push(format!("x{j}")),
                        _ => factors.push(format!("x{j}^{e}")),
                    }
                }
                line.push_str(&factors.join("*"));
            }
            line.push_str(" = 0\n");
            out.push_str(&line);
        }
        Ok(out)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SystemError {
    #[error("system has no equations")]
    Empty,
    #[error("system is not square: {equations} equations over {variables} variables")]
    NotSquare { equations: usize, variables: usize },
    #[error("term exponent vector has {found} entries, expected {expected}")]
    ExponentArity { expected: usize, found: usize },
    #[error("equation index {index} out of range (system has {count})")]
    EquationIndex { index: usize, count: usize },
    #[error("point has {found} coordinates, expected {expected}")]
    PointArity { expected: usize, found: usize },
    #[error("coefficient {coefficient} has no finite decimal form")]
    Unprintable { coefficient: String },
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

/// Parse outcome: the system plus non-fatal observations.
#[derive(Debug, Clone)]
pub struct Parsed {
    pub system: PolynomialSystem,
    /// Set when some variable index below the maximum never appears; the
    /// missing variables still count toward n.
    pub variable_gap: bool,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("line {line}, column {column}: exponent must be a non-negative integer")]
    NonIntegerExponent { line: usize, column: usize },
    #[error("no equations found")]
    NoEquations,
    #[error(transparent)]
    System(#[from] SystemError),
}

/// Parse a system from text: one `lhs = rhs` equation per line, `#` comments,
/// variables `x0..x{n-1}` with `x`,`y`,`z` accepted as aliases for x0,x1,x2.
/// The right-hand side is folded into the polynomial (fᵢ := lhs − rhs) so the
/// resulting system is in `= 0` form, and n = 1 + max variable index seen.
pub fn parse_system(text: &str) -> Result<Parsed, ParseError> {
    let mut raw_eqs: Vec<Vec<RawTerm>> = Vec::new();
    let mut max_var: Option<usize> = None;
    let mut seen_vars: Vec<usize> = Vec::new();

    for (line_no, raw_line) in text.lines().enumerate() {
        let line = match raw_line.split_once('#') {
            Some((before, _)) => before,
            None => raw_line,
        };
        if line.trim().is_empty() {
            continue;
        }
        let mut lexer = Lexer::new(line, line_no + 1);
        let terms = parse_equation(&mut lexer)?;
        for t in &terms {
            for &(v, _) in &t.powers {
                max_var = Some(max_var.map_or(v, |m| m.max(v)));
                if !seen_vars.contains(&v) {
                    seen_vars.push(v);
                }
            }
        }
        raw_eqs.push(terms);
    }
    if raw_eqs.is_empty() {
        return Err(ParseError::NoEquations);
    }

    let n_from_vars = max_var.map_or(0, |m| m + 1);
    // A square system must have as many variables as equations; constants-only
    // input still produces equations, so take the max.
    let n = n_from_vars.max(raw_eqs.len());
    let variable_gap = (0..n_from_vars).any(|v| !seen_vars.contains(&v));

    let mut equations = Vec::with_capacity(raw_eqs.len());
    for terms in raw_eqs {
        let converted = terms
            .into_iter()
            .map(|t| {
                let mut exponents = vec![0u32; n];
                for (v, e) in t.powers {
                    exponents[v] += e;
                }
                Term { coefficient: t.coefficient, exponents }
            })
            .collect();
        equations.push(Polynomial::new(n, converted)?);
    }
    let system = PolynomialSystem::new(equations)?;
    Ok(Parsed { system, variable_gap })
}

struct RawTerm {
    coefficient: BigRational,
    powers: Vec<(usize, u32)>,
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl Lexer {
    fn new(text: &str, line: usize) -> Self {
        Self { chars: text.chars().collect(), pos: 0, line }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        self.skip_ws();
        let c = self.chars.get(self.pos).copied();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax { line: self.line, column: self.column(), message: message.into() }
    }

    fn read_uint(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            None
        } else {
            Some(self.chars[start..self.pos].iter().collect())
        }
    }

    fn read_number(&mut self) -> Option<String> {
        let int = self.read_uint()?;
        if self.chars.get(self.pos) == Some(&'.') {
            self.pos += 1;
            match self.read_uint_noskip() {
                Some(frac) => Some(format!("{int}.{frac}")),
                None => Some(format!("{int}.")),
            }
        } else {
            Some(int)
        }
    }

    fn read_uint_noskip(&mut self) -> Option<String> {
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            None
        } else {
            Some(self.chars[start..self.pos].iter().collect())
        }
    }
}

fn parse_equation(lx: &mut Lexer) -> Result<Vec<RawTerm>, ParseError> {
    let mut lhs = parse_expr(lx)?;
    match lx.bump() {
        Some('=') => {}
        Some(c) => return Err(lx.error(format!("expected '=', found '{c}'"))),
        None => return Err(lx.error("expected '=' before end of line")),
    }
    let rhs = parse_expr(lx)?;
    if let Some(c) = lx.peek() {
        return Err(lx.error(format!("unexpected '{c}' after equation")));
    }
    // fold: lhs - rhs = 0
    for mut t in rhs {
        t.coefficient = -t.coefficient;
        lhs.push(t);
    }
    Ok(lhs)
}

fn parse_expr(lx: &mut Lexer) -> Result<Vec<RawTerm>, ParseError> {
    let mut terms = Vec::new();
    // optional leading sign on the first term
    let mut sign = BigRational::one();
    match lx.peek() {
        Some('-') => {
            lx.bump();
            sign = -sign;
        }
        Some('+') => {
            lx.bump();
        }
        _ => {}
    }
    loop {
        let mut term = parse_term(lx)?;
        term.coefficient *= &sign;
        terms.push(term);
        match lx.peek() {
            Some('+') => {
                lx.bump();
                sign = BigRational::one();
            }
            Some('-') => {
                lx.bump();
                sign = -BigRational::one();
            }
            _ => break,
        }
    }
    Ok(terms)
}

fn parse_term(lx: &mut Lexer) -> Result<RawTerm, ParseError> {
    let mut coefficient = BigRational::one();
    let mut powers: Vec<(usize, u32)> = Vec::new();
    loop {
        parse_factor(lx, &mut coefficient, &mut powers)?;
        if lx.peek() == Some('*') {
            lx.bump();
        } else {
            break;
        }
    }
    Ok(RawTerm { coefficient, powers })
}

fn parse_factor(
    lx: &mut Lexer,
    coefficient: &mut BigRational,
    powers: &mut Vec<(usize, u32)>,
) -> Result<(), ParseError> {
    match lx.peek() {
        Some(c) if c.is_ascii_digit() => {
            let col = lx.column();
            let num = lx.read_number().ok_or_else(|| lx.error("expected number"))?;
            let value = parse_decimal(&num).ok_or_else(|| ParseError::Syntax {
                line: lx.line,
                column: col,
                message: format!("malformed number '{num}'"),
            })?;
            *coefficient *= value;
            Ok(())
        }
        Some(c) if c == 'x' || c == 'y' || c == 'z' => {
            lx.bump();
            let var = if c == 'x' {
                // 'x' followed by digits is an indexed variable, bare 'x' is x0
                match lx.chars.get(lx.pos) {
                    Some(d) if d.is_ascii_digit() => {
                        let idx = lx.read_uint_noskip().unwrap();
                        idx.parse::<usize>().map_err(|_| lx.error("variable index too large"))?
                    }
                    _ => 0,
                }
            } else if c == 'y' {
                1
            } else {
                2
            };
            let exponent = if lx.peek() == Some('^') {
                lx.bump();
                let col = lx.column();
                let digits = lx.read_uint().ok_or(ParseError::NonIntegerExponent {
                    line: lx.line,
                    column: col,
                })?;
                // a '.' right after the integer digits means a fractional exponent
                if lx.chars.get(lx.pos) == Some(&'.') {
                    return Err(ParseError::NonIntegerExponent { line: lx.line, column: col });
                }
                digits.parse::<u32>().map_err(|_| lx.error("exponent too large"))?
            } else {
                1
            };
            powers.push((var, exponent));
            Ok(())
        }
        Some(c) => Err(lx.error(format!("expected a number or variable, found '{c}'"))),
        None => Err(lx.error("expected a number or variable before end of line")),
    }
}

impl fmt::Display for PolynomialSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.print_canonical() {
            Ok(s) => f.write_str(&s),
            Err(_) => write!(f, "<system with non-decimal coefficients, n={}>", self.n),
        }
    }
}

/// The worked ternary cubic example used throughout the test suite.
pub const EXAMPLE_TERNARY: &str = "\
x^3 + y^2 - y + 2*z = 35
y^3 - x + 2*z*x = 50
z^3 - z^2 + 2*x - 2*y = 20
";

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::pow2;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn ternary() -> PolynomialSystem {
        parse_system(EXAMPLE_TERNARY).unwrap().system
    }

    #[test]
    fn parses_ternary_example() {
        let parsed = parse_system(EXAMPLE_TERNARY).unwrap();
        let sys = &parsed.system;
        assert_eq!(sys.n(), 3);
        assert!(!parsed.variable_gap);
        let (h, t) = sys.degree_stats();
        assert_eq!((h, t), (3, 5));
        // first equation: {x0^3, x1^2, -x1, 2 x2, -35}
        let eq0 = sys.equation(0).unwrap();
        assert_eq!(eq0.term_count(), 5);
        let terms = eq0.terms();
        assert_eq!(terms[0].exponents, vec![3, 0, 0]);
        assert_eq!(terms[0].coefficient, rat(1, 1));
        assert_eq!(terms[1].exponents, vec![0, 2, 0]);
        assert_eq!(terms[2].exponents, vec![0, 1, 0]);
        assert_eq!(terms[2].coefficient, rat(-1, 1));
        assert_eq!(terms[3].exponents, vec![0, 0, 1]);
        assert_eq!(terms[3].coefficient, rat(2, 1));
        assert_eq!(terms[4].exponents, vec![0, 0, 0]);
        assert_eq!(terms[4].coefficient, rat(-35, 1));
    }

    #[test]
    fn parses_identity_system() {
        let parsed = parse_system("x0 = 0").unwrap();
        assert_eq!(parsed.system.n(), 1);
        assert_eq!(parsed.system.degree_stats(), (1, 1));
    }

    #[test]
    fn parses_decimal_coefficient_term() {
        let parsed = parse_system("x0^2*x1 - 3.5 = 0\nx1 = 0").unwrap();
        let eq0 = parsed.system.equation(0).unwrap();
        assert_eq!(eq0.terms()[0].exponents, vec![2, 1]);
        assert_eq!(eq0.terms()[1].coefficient, rat(-7, 2));
        assert_eq!(parsed.system.degree_stats().0, 3);
        // print/re-parse round trip
        let printed = parsed.system.print_canonical().unwrap();
        let reparsed = parse_system(&printed).unwrap().system;
        assert_eq!(reparsed, parsed.system);
    }

    #[test]
    fn variable_gap_sets_flag() {
        let parsed = parse_system("x0 + x2 = 1\nx2 = 0\nx0 = 0").unwrap();
        assert!(parsed.variable_gap);
        assert_eq!(parsed.system.n(), 3);
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_system("x0 + = 3") {
            Err(ParseError::Syntax { line: 1, column, .. }) => assert!(column >= 6),
            other => panic!("expected syntax error, got {other:?}"),
        }
        match parse_system("x0^2.5 = 0") {
            Err(ParseError::NonIntegerExponent { line: 1, .. }) => {}
            other => panic!("expected exponent error, got {other:?}"),
        }
        assert!(matches!(parse_system("x0 + 3"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_system("# only a comment\n"), Err(ParseError::NoEquations)));
    }

    #[test]
    fn evaluates_ternary_at_candidate() {
        let sys = ternary();
        let p = [rat(11, 4), rat(13, 4), rat(25, 8)];
        assert_eq!(sys.evaluate(0, &p).unwrap(), rat(-41, 64));
        assert_eq!(sys.evaluate(1, &p).unwrap(), rat(-79, 64));
        assert_eq!(sys.evaluate(2, &p).unwrap(), rat(-127, 512));
        let zero = [rat(0, 1), rat(0, 1), rat(0, 1)];
        assert_eq!(sys.evaluate(0, &zero).unwrap(), rat(-35, 1));
        assert!(sys.evaluate(3, &p).is_err());
    }

    #[test]
    fn gradient_of_single_linear_equation() {
        let sys = parse_system("x0 = 0").unwrap().system;
        // F = x^2, dF/dx = 2x
        let g = sys.grad_sum_of_squares(&[rat(3, 1)]).unwrap();
        assert_eq!(g, vec![rat(6, 1)]);
    }

    #[test]
    fn gradient_vanishes_at_root() {
        let sys = parse_system("x0^2 = 4").unwrap().system;
        let g = sys.grad_sum_of_squares(&[rat(2, 1)]).unwrap();
        assert_eq!(g, vec![rat(0, 1)]);
    }

    #[test]
    fn gradient_matches_exact_values_at_candidate() {
        let sys = ternary();
        let p = [rat(11, 4), rat(13, 4), rat(25, 8)];
        let g = sys.grad_sum_of_squares(&p).unwrap();
        assert_eq!(g[0], rat(-22027, 512));
        assert_eq!(g[1], rat(-43153, 512));
        assert_eq!(g[2], rat(-451773, 16384));
    }

    #[test]
    fn gradient_matches_central_difference() {
        // central finite differences of exact F with rational step 2^-20
        let sys = ternary();
        let p = [rat(11, 4), rat(13, 4), rat(25, 8)];
        let step = pow2(-20);
        let g = sys.grad_sum_of_squares(&p).unwrap();
        for j in 0..3 {
            let mut hi = p.to_vec();
            let mut lo = p.to_vec();
            hi[j] += &step;
            lo[j] -= &step;
            let diff = (sys.sum_of_squares(&hi) - sys.sum_of_squares(&lo))
                / (&step * BigRational::from_integer(BigInt::from(2)));
            let rel = ((&diff - &g[j]) / &g[j]).abs();
            assert!(rel < rat(1, 10_000), "component {j}: rel err {rel}");
        }
    }

    #[test]
    fn degree_stats_examples() {
        assert_eq!(parse_system("x0 = 0").unwrap().system.degree_stats(), (1, 1));
        let sys = parse_system("x0^2*x1 + x1 = 0\nx1 = 0").unwrap().system;
        assert_eq!(sys.degree_stats(), (3, 2));
    }

    #[test]
    fn exact_root_evaluates_to_zero() {
        // planted rational root: f(x) = (x - 3/2)(x + 2) = x^2 + 1/2 x - 3
        let sys = parse_system("x0^2 + 0.5*x0 - 3 = 0").unwrap().system;
        assert_eq!(sys.evaluate(0, &[rat(3, 2)]).unwrap(), rat(0, 1));
    }

    #[test]
    fn canonical_print_is_graded_lex() {
        let sys = ternary();
        let printed = sys.print_canonical().unwrap();
        let first = printed.lines().next().unwrap();
        assert_eq!(first, "x0^3 + x1^2 - x1 + 2*x2 - 35 = 0");
        let reparsed = parse_system(&printed).unwrap().system;
        assert_eq!(reparsed, sys);
    }
}
