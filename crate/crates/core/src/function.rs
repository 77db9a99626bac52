//! Evaluable functions on `[0, 1]`: closed forms, sampled grids, and pointwise
//! combinations of those.

use std::collections::BTreeMap;
use std::io::Read;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::{tokenize, Expr, Func, TokenKind};

/// Breakpoints closer than this are merged.
pub const BREAKPOINT_DEDUP_TOL: f64 = 1e-12;

/// Anything that can be evaluated pointwise on `[0, 1]`.
pub trait RealFunction {
    fn value_at(&self, x: f64) -> Result<f64>;
}

impl<F: RealFunction + ?Sized> RealFunction for &F {
    fn value_at(&self, x: f64) -> Result<f64> {
        (**self).value_at(x)
    }
}

/// Linear interpolant through `(xs[i], ys[i])` with `xs[0] = 0` and `xs[last] = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledGrid {
    xs: Vec<f64>,
    ys: Vec<f64>,
    warnings: Vec<String>,
}

impl SampledGrid {
    /// Builds a grid from unordered `(x, y)` rows.
    ///
    /// Rows are sorted by `x`. If the data do not reach an endpoint, the nearest sample
    /// value is extended to it and a warning is recorded.
    pub fn from_rows(rows: &[(f64, f64)]) -> Result<SampledGrid> {
        if rows.len() < 2 {
            return Err(Error::Ingest(format!(
                "need at least 2 rows, got {}",
                rows.len()
            )));
        }
        if let Some((x, y)) = rows.iter().find(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::Ingest(format!("non-finite sample ({x}, {y})")));
        }

        let mut rows = rows.to_vec();
        rows.sort_by(|a, b| a.0.total_cmp(&b.0));
        if let Some(w) = rows.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::Ingest(format!("duplicate abscissa {}", w[0].0)));
        }

        let (first, last) = (rows[0], rows[rows.len() - 1]);
        if first.0 < 0.0 || last.0 > 1.0 {
            return Err(Error::Ingest(format!(
                "abscissae must lie in [0, 1], got range [{}, {}]",
                first.0, last.0
            )));
        }

        let mut warnings = Vec::new();
        if first.0 > 0.0 {
            warnings.push(format!(
                "data start at x = {}; extended constant value {} to x = 0",
                first.0, first.1
            ));
            rows.insert(0, (0.0, first.1));
        }
        if last.0 < 1.0 {
            warnings.push(format!(
                "data end at x = {}; extended constant value {} to x = 1",
                last.0, last.1
            ));
            rows.push((1.0, last.1));
        }

        let (xs, ys) = rows.into_iter().unzip();
        Ok(SampledGrid { xs, ys, warnings })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    /// Ingest warnings, e.g. endpoint extension.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn interpolate(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::OutOfDomain(x));
        }
        // index of the last knot <= x
        let i = self.xs.partition_point(|&k| k <= x) - 1;
        if i + 1 == self.xs.len() {
            return Ok(self.ys[i]);
        }
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        Ok(y0 + (y1 - y0) * ((x - x0) / (x1 - x0)))
    }

    /// Exact integral of the interpolant over `[a, b]`.
    pub fn integral(&self, a: f64, b: f64) -> Result<f64> {
        let mut knots = vec![a];
        knots.extend(self.xs.iter().copied().filter(|&k| k > a && k < b));
        knots.push(b);
        trapezoid(&knots, |x| self.interpolate(x))
    }
}

pub(crate) fn trapezoid(knots: &[f64], f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let mut sum = 0.0;
    let mut prev = (knots[0], f(knots[0])?);
    for &k in &knots[1..] {
        let cur = (k, f(k)?);
        sum += 0.5 * (cur.0 - prev.0) * (cur.1 + prev.1);
        prev = cur;
    }
    Ok(sum)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    ClosedForm(Expr),
    Sampled(SampledGrid),
    Shifted(FunctionHandle, f64),
    Scaled(FunctionHandle, f64),
    Sum(FunctionHandle, FunctionHandle),
}

/// Cheaply clonable, immutable function on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionHandle {
    body: Arc<Body>,
    breakpoints: Vec<f64>,
    label: String,
}

impl FunctionHandle {
    pub fn closed_form(expr: Expr, label: impl Into<String>) -> FunctionHandle {
        FunctionHandle {
            breakpoints: expr.breakpoints(),
            body: Arc::new(Body::ClosedForm(expr)),
            label: label.into(),
        }
    }

    pub fn constant(c: f64) -> FunctionHandle {
        FunctionHandle::closed_form(Expr::Const(c), c.to_string())
    }

    pub fn sampled(grid: SampledGrid, label: impl Into<String>) -> FunctionHandle {
        let n = grid.xs.len();
        FunctionHandle {
            breakpoints: normalize_breakpoints(grid.xs[1..n - 1].to_vec()),
            body: Arc::new(Body::Sampled(grid)),
            label: label.into(),
        }
    }

    /// `x -> self(x) + offset`.
    pub fn shifted(&self, offset: f64) -> FunctionHandle {
        FunctionHandle {
            breakpoints: self.breakpoints.clone(),
            label: format!(
                "({}) {} {}",
                self.label,
                if offset < 0.0 { '-' } else { '+' },
                offset.abs()
            ),
            body: Arc::new(Body::Shifted(self.clone(), offset)),
        }
    }

    /// `x -> factor * self(x)`.
    pub fn scaled(&self, factor: f64) -> FunctionHandle {
        FunctionHandle {
            breakpoints: self.breakpoints.clone(),
            label: format!("{factor}*({})", self.label),
            body: Arc::new(Body::Scaled(self.clone(), factor)),
        }
    }

    /// `x -> self(x) + other(x)`.
    pub fn sum(&self, other: &FunctionHandle) -> FunctionHandle {
        let mut bps = self.breakpoints.clone();
        bps.extend_from_slice(&other.breakpoints);
        FunctionHandle {
            breakpoints: normalize_breakpoints(bps),
            label: format!("({}) + ({})", self.label, other.label),
            body: Arc::new(Body::Sum(self.clone(), other.clone())),
        }
    }

    /// Adds manual breakpoints, e.g. kinks the affine detection cannot see.
    pub fn with_extra_breakpoints(mut self, extra: &[f64]) -> Result<FunctionHandle> {
        if let Some(&bad) = extra.iter().find(|&&b| !(b > 0.0 && b < 1.0)) {
            return Err(Error::OutOfDomain(bad));
        }
        self.breakpoints.extend_from_slice(extra);
        self.breakpoints = normalize_breakpoints(std::mem::take(&mut self.breakpoints));
        Ok(self)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> FunctionHandle {
        self.label = label.into();
        self
    }

    pub fn body(&self) -> &Body {
        &self.body
    }

    /// Intrinsic breakpoints, sorted and strictly inside `(0, 1)`.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Ingest warnings collected from every sampled body in the tree.
    pub fn warnings(&self) -> Vec<String> {
        match &*self.body {
            Body::ClosedForm(_) => Vec::new(),
            Body::Sampled(g) => g.warnings.clone(),
            Body::Shifted(h, _) | Body::Scaled(h, _) => h.warnings(),
            Body::Sum(a, b) => {
                let mut w = a.warnings();
                w.extend(b.warnings());
                w
            }
        }
    }

    /// Union of intrinsic breakpoints, sample knots and `extra`.
    pub fn merged_breakpoints(&self, extra: &[f64]) -> Result<Vec<f64>> {
        if let Some(&bad) = extra.iter().find(|&&b| !(b > 0.0 && b < 1.0)) {
            return Err(Error::OutOfDomain(bad));
        }
        let mut all = self.breakpoints.clone();
        self.collect_knots(&mut all);
        all.extend_from_slice(extra);
        Ok(normalize_breakpoints(all))
    }

    fn collect_knots(&self, out: &mut Vec<f64>) {
        match &*self.body {
            Body::ClosedForm(_) => {}
            Body::Sampled(g) => out.extend_from_slice(&g.xs),
            Body::Shifted(h, _) | Body::Scaled(h, _) => h.collect_knots(out),
            Body::Sum(a, b) => {
                a.collect_knots(out);
                b.collect_knots(out);
            }
        }
    }

    /// Knots of the piecewise-linear representation, when the whole tree is
    /// built from sampled grids.
    pub(crate) fn linear_knots(&self) -> Option<Vec<f64>> {
        match &*self.body {
            Body::ClosedForm(_) => None,
            Body::Sampled(g) => Some(g.xs.clone()),
            Body::Shifted(h, _) | Body::Scaled(h, _) => h.linear_knots(),
            Body::Sum(a, b) => {
                let mut k = a.linear_knots()?;
                k.extend(b.linear_knots()?);
                Some(k)
            }
        }
    }
}

impl RealFunction for FunctionHandle {
    fn value_at(&self, x: f64) -> Result<f64> {
        match &*self.body {
            Body::ClosedForm(e) => e.eval(x),
            Body::Sampled(g) => g.interpolate(x),
            Body::Shifted(h, c) => Ok(h.value_at(x)? + c),
            Body::Scaled(h, c) => Ok(h.value_at(x)? * c),
            Body::Sum(a, b) => Ok(a.value_at(x)? + b.value_at(x)?),
        }
    }
}

/// Sorts, drops values outside `(0, 1)`, and merges values within
/// [`BREAKPOINT_DEDUP_TOL`] of their predecessor.
pub fn normalize_breakpoints(mut points: Vec<f64>) -> Vec<f64> {
    points.retain(|&p| p > 0.0 && p < 1.0);
    points.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(points.len());
    for p in points {
        if out.last().is_none_or(|&q| p - q > BREAKPOINT_DEDUP_TOL) {
            out.push(p);
        }
    }
    out
}

fn is_reserved(name: &str) -> bool {
    matches!(name, "x" | "e" | "pi") || Func::from_name(name).is_some()
}

/// Replaces every whole identifier named in `substitutions` by its parenthesized value.
pub fn substitute_parameters(
    source: &str,
    substitutions: &BTreeMap<String, f64>,
) -> Result<String> {
    for (name, value) in substitutions {
        let valid_ident = name
            .chars()
            .next()
            .is_some_and(|c| c.is_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_alphanumeric() || c == '_');
        if !valid_ident {
            return Err(Error::InvalidParameter {
                name: name.clone(),
                reason: "not an identifier".into(),
            });
        }
        if is_reserved(name) {
            return Err(Error::InvalidParameter {
                name: name.clone(),
                reason: "reserved name".into(),
            });
        }
        if !value.is_finite() {
            return Err(Error::InvalidParameter {
                name: name.clone(),
                reason: format!("non-finite value {value}"),
            });
        }
    }
    if substitutions.is_empty() {
        return Ok(source.to_string());
    }

    let tokens = tokenize(source)?;
    let mut out = String::with_capacity(source.len());
    let mut last = 0;
    for tok in tokens.iter().filter(|t| t.kind == TokenKind::Ident) {
        if let Some(value) = substitutions.get(tok.text) {
            // token positions count characters; convert to a byte offset
            let start = source
                .char_indices()
                .nth(tok.position)
                .map_or(source.len(), |(b, _)| b);
            out.push_str(&source[last..start]);
            out.push_str(&format!("({value})"));
            last = start + tok.text.len();
        }
    }
    out.push_str(&source[last..]);
    Ok(out)
}

/// Parses `source` after parameter substitution into a closed-form handle.
pub fn from_expression(
    source: &str,
    substitutions: &BTreeMap<String, f64>,
) -> Result<FunctionHandle> {
    let text = substitute_parameters(source, substitutions)?;
    let expr = Expr::parse(&text)?;
    Ok(FunctionHandle::closed_form(expr, text))
}

/// Builds a sampled handle from `(x, y)` rows.
pub fn from_csv(rows: &[(f64, f64)]) -> Result<FunctionHandle> {
    let grid = SampledGrid::from_rows(rows)?;
    Ok(FunctionHandle::sampled(grid, "sampled data"))
}

/// Reads two numeric columns `x,y`; a header row is skipped when its first
/// field is not numeric.
pub fn read_csv_rows<R: Read>(reader: R) -> Result<Vec<(f64, f64)>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows = Vec::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| Error::Ingest(e.to_string()))?;
        if record.len() != 2 {
            return Err(Error::Ingest(format!(
                "row {}: expected 2 columns, found {}",
                line + 1,
                record.len()
            )));
        }
        let x = record[0].parse::<f64>();
        if line == 0 && x.is_err() {
            continue;
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| Error::Ingest(format!("row {}: `{s}` is not a number", line + 1)))
        };
        rows.push((parse(&record[0])?, parse(&record[1])?));
    }
    Ok(rows)
}

/// Reads a CSV file and builds a sampled handle labeled with the path.
pub fn from_csv_path(path: &std::path::Path) -> Result<FunctionHandle> {
    let file =
        std::fs::File::open(path).map_err(|e| Error::Ingest(format!("{}: {e}", path.display())))?;
    let rows = read_csv_rows(file)?;
    Ok(from_csv(&rows)?.with_label(path.display().to_string()))
}
