//! Text formats for groups, matrices, multipliers, cocycles and traced
//! algebras. The exact grammars are documented in docs/FORMATS.md; every
//! parser here reports the offending line on failure.

use num_complex::Complex64;

use crate::error::Error;
use crate::group::{FiniteGroup, Subgroup};
use crate::linalg::ComplexMatrix;
use crate::multiplier::{Carrier, Multiplier};
use crate::transforms::{Cocycle, FiniteActionSpace};
use crate::vn::TracedAlgebra;
use crate::window::{Ambient, GroupWindow};
use crate::Result;

/// Parse "1.5", "2j", "1+2j", "1.5-0.25j" into a complex number.
pub fn parse_complex(token: &str) -> Result<Complex64> {
    let t = token.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty complex token".into()));
    }
    if let Some(body) = t.strip_suffix('j') {
        // find the split between real and imaginary parts, skipping a
        // leading sign
        let bytes = body.as_bytes();
        let mut split = None;
        for (i, &b) in bytes.iter().enumerate().skip(1) {
            if (b == b'+' || b == b'-') && bytes[i - 1] != b'e' && bytes[i - 1] != b'E' {
                split = Some(i);
            }
        }
        match split {
            Some(i) => {
                let re: f64 = body[..i]
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad real part in '{t}'")))?;
                let im_str = &body[i..];
                let im: f64 = if im_str == "+" {
                    1.0
                } else if im_str == "-" {
                    -1.0
                } else {
                    im_str
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad imaginary part in '{t}'")))?
                };
                Ok(Complex64::new(re, im))
            }
            None => {
                let im: f64 = if body.is_empty() {
                    1.0
                } else if body == "-" {
                    -1.0
                } else {
                    body.parse()
                        .map_err(|_| Error::Parse(format!("bad imaginary part in '{t}'")))?
                };
                Ok(Complex64::new(0.0, im))
            }
        }
    } else {
        let re: f64 = t
            .parse()
            .map_err(|_| Error::Parse(format!("bad number '{t}'")))?;
        Ok(Complex64::new(re, 0.0))
    }
}

/// Render a complex number in the same token grammar.
pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im >= 0.0 {
        format!("{}+{}j", z.re, z.im)
    } else {
        format!("{}{}j", z.re, z.im)
    }
}

/// Key/value lines plus named multi-line sections (a key whose value is
/// empty opens a section that runs until the next `key =` line).
struct KvFile {
    entries: Vec<(String, String)>,
    sections: Vec<(String, Vec<String>)>,
}

fn parse_kv(text: &str) -> KvFile {
    let mut entries = Vec::new();
    let mut sections: Vec<(String, Vec<String>)> = Vec::new();
    let mut open_section: Option<usize> = None;
    for raw in text.lines() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(eq) = line.find('=') {
            let key = line[..eq].trim().to_string();
            let value = line[eq + 1..].trim().to_string();
            // a label = value line inside an open section stays in the
            // section when the key is not a known top-level key
            if let Some(idx) = open_section {
                if !is_top_level_key(&key) {
                    sections[idx].1.push(line.to_string());
                    continue;
                }
            }
            if value.is_empty() {
                sections.push((key, Vec::new()));
                open_section = Some(sections.len() - 1);
            } else {
                entries.push((key, value));
                open_section = None;
            }
        } else if let Some(idx) = open_section {
            sections[idx].1.push(line.to_string());
        }
    }
    KvFile { entries, sections }
}

fn is_top_level_key(key: &str) -> bool {
    matches!(
        key,
        "kind"
            | "n"
            | "left"
            | "right"
            | "labels"
            | "table"
            | "group"
            | "group_expr"
            | "window"
            | "formula"
            | "t"
            | "gens"
            | "values"
            | "target"
            | "target_expr"
            | "points"
            | "action"
            | "alpha"
            | "measure"
            | "blocks"
            | "weights"
            | "element"
            | "subset"
            | "c"
    )
}

impl KvFile {
    fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    fn section(&self, key: &str) -> Option<&[String]> {
        self.sections
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_slice())
    }
}

/// Compact group expressions: cyclic(n), dihedral(n), symmetric(n),
/// product(expr, expr).
pub fn parse_group_expr(expr: &str) -> Result<FiniteGroup> {
    let e = expr.trim();
    let open = e
        .find('(')
        .ok_or_else(|| Error::Parse(format!("expected 'kind(...)' in '{e}'")))?;
    if !e.ends_with(')') {
        return Err(Error::Parse(format!("unbalanced parentheses in '{e}'")));
    }
    let kind = &e[..open];
    let inner = &e[open + 1..e.len() - 1];
    match kind {
        "cyclic" | "dihedral" | "symmetric" => {
            let n: usize = inner
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad parameter in '{e}'")))?;
            match kind {
                "cyclic" => FiniteGroup::cyclic(n),
                "dihedral" => FiniteGroup::dihedral(n),
                _ => FiniteGroup::symmetric(n),
            }
        }
        "product" => {
            // split at the top-level comma
            let mut depth = 0usize;
            let mut split = None;
            for (i, ch) in inner.char_indices() {
                match ch {
                    '(' => depth += 1,
                    ')' => depth -= 1,
                    ',' if depth == 0 => {
                        split = Some(i);
                        break;
                    }
                    _ => {}
                }
            }
            let i =
                split.ok_or_else(|| Error::Parse(format!("product needs two factors: '{e}'")))?;
            let left = parse_group_expr(&inner[..i])?;
            let right = parse_group_expr(&inner[i + 1..])?;
            FiniteGroup::direct_product(&left, &right)
        }
        other => Err(Error::Parse(format!("unknown group kind '{other}'"))),
    }
}

/// Group spec file: kind plus parameters, or an explicit Cayley table.
pub fn parse_group_spec(text: &str) -> Result<FiniteGroup> {
    let kv = parse_kv(text);
    let kind = kv
        .get("kind")
        .ok_or_else(|| Error::Parse("missing 'kind'".into()))?;
    match kind {
        "cyclic" | "dihedral" | "symmetric" => {
            let n: usize = kv
                .get("n")
                .ok_or_else(|| Error::Parse("missing 'n'".into()))?
                .parse()
                .map_err(|_| Error::Parse("bad 'n'".into()))?;
            match kind {
                "cyclic" => FiniteGroup::cyclic(n),
                "dihedral" => FiniteGroup::dihedral(n),
                _ => FiniteGroup::symmetric(n),
            }
        }
        "product" => {
            let left = parse_group_expr(
                kv.get("left")
                    .ok_or_else(|| Error::Parse("missing 'left'".into()))?,
            )?;
            let right = parse_group_expr(
                kv.get("right")
                    .ok_or_else(|| Error::Parse("missing 'right'".into()))?,
            )?;
            FiniteGroup::direct_product(&left, &right)
        }
        "explicit" => {
            let rows = kv
                .section("table")
                .ok_or_else(|| Error::Parse("missing 'table =' section".into()))?;
            let table: Vec<Vec<usize>> = rows
                .iter()
                .map(|line| {
                    line.split_whitespace()
                        .map(|tok| {
                            tok.parse::<usize>()
                                .map_err(|_| Error::Parse(format!("bad table entry '{tok}'")))
                        })
                        .collect()
                })
                .collect::<Result<_>>()?;
            let labels: Vec<String> = match kv.get("labels") {
                Some(l) => l.split_whitespace().map(|s| s.to_string()).collect(),
                None => (0..table.len()).map(|i| format!("g{i}")).collect(),
            };
            FiniteGroup::from_table("explicit", labels, table)
        }
        other => Err(Error::Parse(format!("unknown group kind '{other}'"))),
    }
}

/// Window expressions: "free(r) radius R" or "lattice(d) radius R".
pub fn parse_window_expr(expr: &str) -> Result<GroupWindow> {
    let e = expr.trim();
    let parts: Vec<&str> = e.split_whitespace().collect();
    if parts.len() != 3 || parts[1] != "radius" {
        return Err(Error::Parse(format!(
            "expected 'free(r) radius R' or 'lattice(d) radius R', got '{e}'"
        )));
    }
    let radius: usize = parts[2]
        .parse()
        .map_err(|_| Error::Parse(format!("bad radius '{}'", parts[2])))?;
    let head = parts[0];
    let open = head
        .find('(')
        .ok_or_else(|| Error::Parse(format!("bad ambient '{head}'")))?;
    if !head.ends_with(')') {
        return Err(Error::Parse(format!("bad ambient '{head}'")));
    }
    let param: usize = head[open + 1..head.len() - 1]
        .parse()
        .map_err(|_| Error::Parse(format!("bad ambient parameter in '{head}'")))?;
    let ambient = match &head[..open] {
        "free" => Ambient::Free { rank: param },
        "lattice" => Ambient::Lattice { dim: param },
        other => return Err(Error::Parse(format!("unknown ambient '{other}'"))),
    };
    GroupWindow::ball(ambient, radius)
}

/// Matrix file: a "rows cols" header line, then whitespace-separated
/// complex tokens row-major. Comma-separated lines (CSV) are accepted for
/// real matrices, dimensions inferred.
pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let lines: Vec<&str> = text
        .lines()
        .map(|l| match l.find('#') {
            Some(i) => &l[..i],
            None => l,
        })
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .collect();
    if lines.is_empty() {
        return Err(Error::Parse("empty matrix file".into()));
    }
    if lines[0].contains(',') {
        // CSV: infer dimensions
        let rows: Vec<Vec<f64>> = lines
            .iter()
            .map(|l| {
                l.split(',')
                    .map(|tok| {
                        tok.trim()
                            .parse::<f64>()
                            .map_err(|_| Error::Parse(format!("bad CSV entry '{tok}'")))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Parse("ragged CSV rows".into()));
        }
        let mut m = ComplexMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                m[(i, j)] = Complex64::new(v, 0.0);
            }
        }
        m.validate_finite()?;
        return Ok(m);
    }
    let header: Vec<&str> = lines[0].split_whitespace().collect();
    if header.len() != 2 {
        return Err(Error::Parse("first line must be 'rows cols'".into()));
    }
    let rows: usize = header[0]
        .parse()
        .map_err(|_| Error::Parse("bad row count".into()))?;
    let cols: usize = header[1]
        .parse()
        .map_err(|_| Error::Parse("bad column count".into()))?;
    let tokens: Vec<&str> = lines[1..]
        .iter()
        .flat_map(|l| l.split_whitespace())
        .collect();
    if tokens.len() != rows * cols {
        return Err(Error::Parse(format!(
            "expected {} entries, found {}",
            rows * cols,
            tokens.len()
        )));
    }
    let mut m = ComplexMatrix::zeros(rows, cols);
    for (k, tok) in tokens.iter().enumerate() {
        m.data[k] = parse_complex(tok)?;
    }
    m.validate_finite()?;
    Ok(m)
}

/// Where a multiplier spec's carrier comes from; group files are loaded
/// by the caller so path handling stays in one place.
pub enum CarrierSpec {
    GroupPath(String),
    GroupExpr(String),
    WindowExpr(String),
}

/// A parsed multiplier spec, before carrier resolution.
pub struct MultiplierSpec {
    pub carrier: CarrierSpec,
    body: MultiplierBody,
}

enum MultiplierBody {
    Table(Vec<(String, Complex64)>),
    Constant(Complex64),
    Delta(String),
    Indicator(Vec<String>),
    ExpWordlength { t: f64, gens: Vec<String> },
}

pub fn parse_multiplier_spec(text: &str) -> Result<MultiplierSpec> {
    let kv = parse_kv(text);
    let carrier = if let Some(p) = kv.get("group") {
        CarrierSpec::GroupPath(p.to_string())
    } else if let Some(e) = kv.get("group_expr") {
        CarrierSpec::GroupExpr(e.to_string())
    } else if let Some(w) = kv.get("window") {
        CarrierSpec::WindowExpr(w.to_string())
    } else {
        return Err(Error::Parse(
            "multiplier spec needs 'group', 'group_expr' or 'window'".into(),
        ));
    };

    let body = if let Some(rows) = kv.section("values") {
        let mut table = Vec::new();
        for line in rows {
            let eq = line
                .find('=')
                .ok_or_else(|| Error::Parse(format!("bad values line '{line}'")))?;
            table.push((
                line[..eq].trim().to_string(),
                parse_complex(&line[eq + 1..])?,
            ));
        }
        MultiplierBody::Table(table)
    } else if let Some(f) = kv.get("formula") {
        parse_formula(f, &kv)?
    } else {
        return Err(Error::Parse(
            "multiplier spec needs a 'formula' or a 'values =' section".into(),
        ));
    };
    Ok(MultiplierSpec { carrier, body })
}

fn parse_formula(f: &str, kv: &KvFile) -> Result<MultiplierBody> {
    let f = f.trim();
    if let Some(rest) = f.strip_prefix("constant(") {
        let inner = rest
            .strip_suffix(')')
            .ok_or_else(|| Error::Parse(format!("unbalanced '{f}'")))?;
        return Ok(MultiplierBody::Constant(parse_complex(inner)?));
    }
    if let Some(rest) = f.strip_prefix("delta(") {
        let inner = rest
            .strip_suffix(')')
            .ok_or_else(|| Error::Parse(format!("unbalanced '{f}'")))?;
        return Ok(MultiplierBody::Delta(inner.trim().to_string()));
    }
    if let Some(rest) = f.strip_prefix("indicator(") {
        let inner = rest
            .strip_suffix(')')
            .ok_or_else(|| Error::Parse(format!("unbalanced '{f}'")))?;
        return Ok(MultiplierBody::Indicator(
            inner.split(',').map(|s| s.trim().to_string()).collect(),
        ));
    }
    if f.starts_with("exp(") && f.contains("wordlength") {
        // exp(-t*wordlength)
        let inner = &f[4..f.len() - 1];
        let t_str = inner
            .trim()
            .strip_prefix('-')
            .and_then(|s| s.strip_suffix("wordlength"))
            .and_then(|s| s.trim().strip_suffix('*'))
            .ok_or_else(|| Error::Parse(format!("expected exp(-t*wordlength), got '{f}'")))?;
        let t: f64 = t_str
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad t in '{f}'")))?;
        let gens = kv
            .get("gens")
            .map(|g| g.split_whitespace().map(|s| s.to_string()).collect())
            .unwrap_or_default();
        return Ok(MultiplierBody::ExpWordlength { t, gens });
    }
    Err(Error::Parse(format!(
        "unknown formula '{f}'; supported: constant(c), delta(element), indicator(subset), exp(-t*wordlength)"
    )))
}

impl MultiplierSpec {
    /// Materialize on a group carrier.
    pub fn build_on_group(&self, group: &FiniteGroup) -> Result<Multiplier> {
        let lookup = |label: &str| {
            group
                .element_by_label(label)
                .ok_or_else(|| Error::Parse(format!("unknown element '{label}'")))
        };
        match &self.body {
            MultiplierBody::Table(rows) => {
                let mut values = vec![Complex64::new(0.0, 0.0); group.order()];
                let mut seen = vec![false; group.order()];
                for (label, v) in rows {
                    let idx = lookup(label)?;
                    values[idx] = *v;
                    seen[idx] = true;
                }
                if let Some(missing) = seen.iter().position(|&s| !s) {
                    return Err(Error::Parse(format!(
                        "no value for element '{}'",
                        group.label(missing)
                    )));
                }
                Multiplier::from_values(Carrier::Group(group.clone()), values, "table from file")
            }
            MultiplierBody::Constant(c) => {
                Ok(Multiplier::constant(Carrier::Group(group.clone()), *c))
            }
            MultiplierBody::Delta(label) => Ok(Multiplier::delta(group, lookup(label)?)),
            MultiplierBody::Indicator(labels) => {
                let subset: Vec<usize> = labels.iter().map(|l| lookup(l)).collect::<Result<_>>()?;
                Ok(Multiplier::indicator(group, &subset))
            }
            MultiplierBody::ExpWordlength { t, gens } => {
                let gen_idx: Vec<usize> = gens.iter().map(|l| lookup(l)).collect::<Result<_>>()?;
                Multiplier::exp_neg_wordlength(group, &gen_idx, *t)
            }
        }
    }

    /// Materialize on a window carrier (formula family only).
    pub fn build_on_window(&self, window: &GroupWindow) -> Result<Multiplier> {
        match &self.body {
            MultiplierBody::Constant(c) => {
                Ok(Multiplier::constant(Carrier::Window(window.clone()), *c))
            }
            MultiplierBody::ExpWordlength { t, .. } => {
                Ok(Multiplier::window_exp_neg_wordlength(window, *t))
            }
            _ => Err(Error::Parse(
                "window multipliers support constant(c) and exp(-t*wordlength)".into(),
            )),
        }
    }
}

/// Cocycle spec: a group, a target group, an action table and an alpha
/// table, both |G| rows by |X| columns; validated on load.
pub fn parse_cocycle_spec(
    text: &str,
    resolve_group: impl Fn(&str) -> Result<FiniteGroup>,
) -> Result<Cocycle> {
    let kv = parse_kv(text);
    let group = match (kv.get("group"), kv.get("group_expr")) {
        (Some(path), _) => resolve_group(path)?,
        (None, Some(expr)) => parse_group_expr(expr)?,
        _ => return Err(Error::Parse("cocycle spec needs a group".into())),
    };
    let target = match (kv.get("target"), kv.get("target_expr")) {
        (Some(path), _) => resolve_group(path)?,
        (None, Some(expr)) => parse_group_expr(expr)?,
        _ => return Err(Error::Parse("cocycle spec needs a target".into())),
    };
    let points: usize = kv
        .get("points")
        .ok_or_else(|| Error::Parse("missing 'points'".into()))?
        .parse()
        .map_err(|_| Error::Parse("bad 'points'".into()))?;
    let read_table = |name: &str, bound: usize| -> Result<Vec<usize>> {
        let rows = kv
            .section(name)
            .ok_or_else(|| Error::Parse(format!("missing '{name} =' section")))?;
        if rows.len() != group.order() {
            return Err(Error::Parse(format!(
                "'{name}' needs {} rows, found {}",
                group.order(),
                rows.len()
            )));
        }
        let mut out = Vec::with_capacity(group.order() * points);
        for line in rows {
            let entries: Vec<usize> = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad entry '{tok}' in '{name}'")))
                })
                .collect::<Result<_>>()?;
            if entries.len() != points {
                return Err(Error::Parse(format!("'{name}' rows need {points} entries")));
            }
            for &e in &entries {
                if e >= bound {
                    return Err(Error::Parse(format!("entry {e} out of range in '{name}'")));
                }
            }
            out.extend(entries);
        }
        Ok(out)
    };
    let action = read_table("action", points)?;
    let alpha = read_table("alpha", target.order())?;
    let measure = match kv.get("measure") {
        Some(m) => m
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad measure entry '{tok}'")))
            })
            .collect::<Result<Vec<f64>>>()?,
        None => vec![1.0 / points as f64; points],
    };
    let space = FiniteActionSpace::new(group, points, action, measure)?;
    let cocycle = Cocycle::new(space, target, alpha)?;
    let report = cocycle.validate();
    if !report.valid {
        return Err(Error::InvalidCocycle(format!(
            "{} violating triples; first at ({}, {}, point {})",
            report.violations.len(),
            report.violations[0].0,
            report.violations[0].1,
            report.violations[0].2
        )));
    }
    Ok(cocycle)
}

/// Algebra spec: block sizes and strictly positive weights.
pub fn parse_algebra_spec(text: &str) -> Result<TracedAlgebra> {
    let kv = parse_kv(text);
    let blocks: Vec<usize> = kv
        .get("blocks")
        .ok_or_else(|| Error::Parse("missing 'blocks'".into()))?
        .split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad block size '{tok}'")))
        })
        .collect::<Result<_>>()?;
    let weights: Vec<f64> = kv
        .get("weights")
        .ok_or_else(|| Error::Parse("missing 'weights'".into()))?
        .split_whitespace()
        .map(|tok| {
            tok.parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad weight '{tok}'")))
        })
        .collect::<Result<_>>()?;
    TracedAlgebra::new(blocks, weights)
}

/// Find a subgroup from generator labels; shared by CLI jobs.
pub fn subgroup_from_labels(group: &FiniteGroup, labels: &[&str]) -> Result<Subgroup> {
    let gens: Vec<usize> = labels
        .iter()
        .map(|l| {
            group
                .element_by_label(l)
                .ok_or_else(|| Error::Parse(format!("unknown element '{l}'")))
        })
        .collect::<Result<_>>()?;
    Subgroup::generated(group, &gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_tokens_roundtrip() {
        for s in ["1.5", "-2", "0.5+0.25j", "1-1j", "2j", "-0.5j"] {
            let z = parse_complex(s).unwrap();
            let back = parse_complex(&format_complex(z)).unwrap();
            assert_eq!(z, back, "{s}");
        }
        assert!(parse_complex("abc").is_err());
    }

    #[test]
    fn group_exprs() {
        assert_eq!(parse_group_expr("cyclic(6)").unwrap().order(), 6);
        assert_eq!(parse_group_expr("dihedral(4)").unwrap().order(), 8);
        assert_eq!(parse_group_expr("symmetric(3)").unwrap().order(), 6);
        assert_eq!(
            parse_group_expr("product(cyclic(2), cyclic(3))")
                .unwrap()
                .order(),
            6
        );
        assert!(parse_group_expr("sporadic(1)").is_err());
    }

    #[test]
    fn explicit_group_spec_with_table() {
        let spec = "\
kind = explicit
labels = e a b
table =
0 1 2
1 2 0
2 0 1
";
        let g = parse_group_spec(spec).unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.mul(1, 2), 0);

        let bad = "\
kind = explicit
labels = e a b
table =
0 1 2
1 0 2
2 2 1
";
        assert!(parse_group_spec(bad).is_err());
    }

    #[test]
    fn matrix_formats() {
        let m = parse_matrix("2 2\n1 0\n1 1\n").unwrap();
        assert_eq!(m.rows, 2);
        assert_eq!(m[(1, 0)].re, 1.0);

        let c = parse_matrix("2 2\n1+1j 0\n0 1-1j\n").unwrap();
        assert_eq!(c[(0, 0)], Complex64::new(1.0, 1.0));

        let csv = parse_matrix("1.0, 0.5\n-0.5, 2.0\n").unwrap();
        assert_eq!(csv.rows, 2);
        assert_eq!(csv[(1, 1)].re, 2.0);

        assert!(parse_matrix("2 2\n1 0\n").is_err());
    }

    #[test]
    fn multiplier_specs() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let spec =
            parse_multiplier_spec("group_expr = cyclic(2)\nformula = constant(1)\n").unwrap();
        let u = spec.build_on_group(&g).unwrap();
        assert!(u.values().iter().all(|v| v.re == 1.0));

        let table =
            parse_multiplier_spec("group_expr = cyclic(2)\nvalues =\n0 = 1\n1 = -1\n").unwrap();
        let ut = table.build_on_group(&g).unwrap();
        assert_eq!(ut.value(1).re, -1.0);

        let missing = parse_multiplier_spec("group_expr = cyclic(2)\nvalues =\n0 = 1\n").unwrap();
        assert!(missing.build_on_group(&g).is_err());

        let formula =
            parse_multiplier_spec("window = free(2) radius 1\nformula = exp(-0.5*wordlength)\n")
                .unwrap();
        let w = parse_window_expr("free(2) radius 1").unwrap();
        let uw = formula.build_on_window(&w).unwrap();
        assert_eq!(uw.values().len(), w.diff_set().len());
    }

    #[test]
    fn cocycle_spec_parses_and_validates() {
        // projection cocycle for Z/4 -> Z/2 on the 2-point kernel
        let text = "\
group_expr = cyclic(4)
target_expr = cyclic(2)
points = 2
action =
0 1
0 1
0 1
0 1
alpha =
0 0
1 1
0 0
1 1
";
        let c = parse_cocycle_spec(text, |_| Err(Error::Parse("no paths in test".into()))).unwrap();
        assert!(c.validate().valid);

        let bad = text.replace("1 1\n0 0\n1 1\n", "1 1\n1 1\n1 1\n");
        assert!(parse_cocycle_spec(&bad, |_| Err(Error::Parse("no".into()))).is_err());
    }

    #[test]
    fn algebra_spec() {
        let a = parse_algebra_spec("blocks = 2 3\nweights = 1 2\n").unwrap();
        assert_eq!(a.blocks(), &[2, 3]);
        let state: f64 = a
            .blocks()
            .iter()
            .zip(a.weights())
            .map(|(&n, &w)| n as f64 * w)
            .sum();
        assert!((state - 1.0).abs() < 1e-12);
        assert!(parse_algebra_spec("blocks = 2\nweights = -1\n").is_err());
    }
}
