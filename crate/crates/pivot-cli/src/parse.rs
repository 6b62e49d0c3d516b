//! Parsers for the three input file formats: monomial ideals, complete
//! intersection elements, and Morse matchings. Every parse failure carries
//! the line and column where it happened.

use pivot_core::arith::{ratio, Multidegree, Polynomial, Rational};
use pivot_core::combin::IndexSet;
use pivot_core::resolutions::{MonomialIdeal, MorseMatching};
use pivot_core::Error as CoreError;

/// A parse failure with its source position (1-based).
#[derive(Debug)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

type PResult<T> = Result<T, ParseError>;

fn err<T>(line: usize, col: usize, message: impl Into<String>) -> PResult<T> {
    Err(ParseError { line, col, message: message.into() })
}

/// A parsed ideal file: the variable names and the validated ideal.
#[derive(Debug, Clone)]
pub struct IdealFile {
    pub vars: Vec<String>,
    pub ideal: MonomialIdeal,
}

/// A parsed complete-intersection file. `coefficients` is present only if
/// every element carried an explicit `coeffs:` row.
#[derive(Debug, Clone)]
pub struct CiFile {
    pub elements: Vec<Polynomial>,
    pub coefficients: Option<Vec<Vec<Polynomial>>>,
}

/// Character-level cursor over one line, tracking the column.
struct Cursor {
    line: usize,
    chars: Vec<char>,
    pos: usize,
}

impl Cursor {
    fn new(line: usize, text: &str) -> Self {
        Cursor { line, chars: text.chars().collect(), pos: 0 }
    }

    fn col(&self) -> usize {
        self.pos + 1
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c == ' ' || c == '\t') {
            self.pos += 1;
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.peek().is_none()
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        self.skip_ws();
        match self.peek() {
            Some(found) if found == c => {
                self.pos += 1;
                Ok(())
            }
            Some(found) => err(self.line, self.col(), format!("expected `{c}`, found `{found}`")),
            None => err(self.line, self.col(), format!("expected `{c}`, found end of line")),
        }
    }

    fn fail<T>(&mut self, message: impl Into<String>) -> PResult<T> {
        self.skip_ws();
        err(self.line, self.col(), message)
    }

    /// Parses an identifier: a letter followed by letters, digits, `_`.
    fn ident(&mut self) -> PResult<String> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() => {
                self.pos += 1;
            }
            Some(c) => return err(self.line, self.col(), format!("expected a name, found `{c}`")),
            None => return err(self.line, self.col(), "expected a name, found end of line"),
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    /// Parses an unsigned decimal integer.
    fn uint(&mut self) -> PResult<u64> {
        self.skip_ws();
        let start_col = self.col();
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.fail("expected a number");
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        digits
            .parse::<u64>()
            .map_err(|_| ParseError {
                line: self.line,
                col: start_col,
                message: format!("number `{digits}` is too large"),
            })
    }
}

/// Splits `text` into content lines, stripping `#` comments and blanks.
fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, raw)| {
            let body = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            (i + 1, body)
        })
        .filter(|(_, body)| !body.trim().is_empty())
        .collect()
}

/// Splits a line at the `key:` prefix, returning (key, cursor over the rest).
fn keyed_line(line_no: usize, body: &str) -> PResult<(String, Cursor)> {
    let mut cur = Cursor::new(line_no, body);
    let key = cur
        .ident()
        .map_err(|e| ParseError { message: "expected a `key:` prefix".into(), ..e })?;
    cur.expect(':')?;
    Ok((key, cur))
}

fn var_index(vars: &[String], name: &str) -> Option<usize> {
    vars.iter().position(|v| v == name)
}

/// Parses a monomial `x`, `x^2`, `w*x^3` over the declared variables.
fn parse_monomial(cur: &mut Cursor, vars: &[String]) -> PResult<Multidegree> {
    let mut exps = vec![0u32; vars.len()];
    loop {
        cur.skip_ws();
        let name_col = cur.col();
        let name = cur.ident()?;
        let Some(v) = var_index(vars, &name) else {
            return err(cur.line, name_col, format!("unknown variable `{name}`"));
        };
        let mut exp: u64 = 1;
        cur.skip_ws();
        if cur.peek() == Some('^') {
            cur.bump();
            exp = cur.uint()?;
        }
        let new = u64::from(exps[v]) + exp;
        exps[v] = u32::try_from(new)
            .map_err(|_| ParseError {
                line: cur.line,
                col: name_col,
                message: format!("exponent of `{name}` is too large"),
            })?;
        cur.skip_ws();
        if cur.peek() == Some('*') {
            cur.bump();
        } else {
            break;
        }
    }
    Ok(Multidegree::new(exps))
}

/// Parses an ideal file:
///
/// ```text
/// # a comment
/// vars: w x y z
/// gens: w*x, x*y, y*z
/// ```
pub fn parse_ideal(text: &str) -> PResult<IdealFile> {
    let lines = content_lines(text);
    if lines.is_empty() {
        return err(1, 1, "empty ideal file: expected `vars:` and `gens:` lines");
    }

    let mut vars: Option<Vec<String>> = None;
    // Generator multidegrees together with the line/col where each started,
    // so ideal-level validation failures can point at a source position.
    let mut gens: Vec<(Multidegree, usize, usize)> = Vec::new();

    for (line_no, body) in lines {
        let (key, mut cur) = keyed_line(line_no, body)?;
        match key.as_str() {
            "vars" => {
                if vars.is_some() {
                    return err(line_no, 1, "duplicate `vars:` line");
                }
                let mut names = Vec::new();
                loop {
                    cur.skip_ws();
                    let col = cur.col();
                    let name = cur.ident()?;
                    if names.contains(&name) {
                        return err(line_no, col, format!("duplicate variable `{name}`"));
                    }
                    names.push(name);
                    if cur.at_end() {
                        break;
                    }
                }
                vars = Some(names);
            }
            "gens" => {
                let Some(vars) = vars.as_deref() else {
                    return err(line_no, 1, "`gens:` line before `vars:` line");
                };
                loop {
                    cur.skip_ws();
                    let col = cur.col();
                    let m = parse_monomial(&mut cur, vars)?;
                    gens.push((m, line_no, col));
                    if cur.at_end() {
                        break;
                    }
                    cur.expect(',')?;
                }
            }
            other => {
                return err(line_no, 1, format!("unknown line kind `{other}:` (expected `vars:` or `gens:`)"));
            }
        }
    }

    let Some(vars) = vars else {
        return err(1, 1, "missing `vars:` line");
    };
    if gens.is_empty() {
        return err(1, 1, "missing `gens:` line");
    }

    let degrees: Vec<Multidegree> = gens.iter().map(|(m, _, _)| m.clone()).collect();
    let ideal = MonomialIdeal::new(vars.len(), degrees).map_err(|e| match e {
        CoreError::NonMinimalGenerators { divisor, multiple } => {
            let (_, line, col) = &gens[multiple - 1];
            ParseError {
                line: *line,
                col: *col,
                message: format!(
                    "generator {multiple} ({}) is divisible by generator {divisor} ({}); \
                     the generating set must be minimal",
                    gens[multiple - 1].0.format_with(&vars),
                    gens[divisor - 1].0.format_with(&vars),
                ),
            }
        }
        CoreError::UnitGenerator { index } => {
            let (_, line, col) = &gens[index - 1];
            ParseError { line: *line, col: *col, message: format!("generator {index} is the unit monomial") }
        }
        other => ParseError { line: 1, col: 1, message: other.to_string() },
    })?;

    Ok(IdealFile { vars, ideal })
}

/// Parses a polynomial: signed terms, each a `*`-product of rational
/// constants and variable powers. Examples: `x^2 + y^2`, `-3/2*x*y + 1`.
fn parse_polynomial(cur: &mut Cursor, vars: &[String]) -> PResult<Polynomial> {
    let mut total = Polynomial::zero(vars.len());
    let mut first = true;
    loop {
        cur.skip_ws();
        let mut negative = false;
        match cur.peek() {
            Some('+') => {
                cur.bump();
            }
            Some('-') => {
                cur.bump();
                negative = true;
            }
            None if !first => return cur.fail("expected a term after the sign"),
            _ if first => {}
            Some(_) | None => {}
        }

        let mut coeff: Rational = ratio(1, 1);
        let mut exps = vec![0u32; vars.len()];
        let mut factors = 0usize;
        loop {
            cur.skip_ws();
            let col = cur.col();
            match cur.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let num = cur.uint()?;
                    let num = i64::try_from(num).map_err(|_| ParseError {
                        line: cur.line,
                        col,
                        message: format!("coefficient `{num}` is too large"),
                    })?;
                    let mut den: i64 = 1;
                    cur.skip_ws();
                    if cur.peek() == Some('/') {
                        cur.bump();
                        let d = cur.uint()?;
                        den = i64::try_from(d).map_err(|_| ParseError {
                            line: cur.line,
                            col,
                            message: format!("denominator `{d}` is too large"),
                        })?;
                        if den == 0 {
                            return err(cur.line, col, "zero denominator");
                        }
                    }
                    coeff *= ratio(num, den);
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    let name = cur.ident()?;
                    let Some(v) = var_index(vars, &name) else {
                        return err(cur.line, col, format!("unknown variable `{name}`"));
                    };
                    let mut exp: u64 = 1;
                    cur.skip_ws();
                    if cur.peek() == Some('^') {
                        cur.bump();
                        exp = cur.uint()?;
                    }
                    let new = u64::from(exps[v]) + exp;
                    exps[v] = u32::try_from(new).map_err(|_| ParseError {
                        line: cur.line,
                        col,
                        message: format!("exponent of `{name}` is too large"),
                    })?;
                }
                Some(c) => return err(cur.line, col, format!("expected a term, found `{c}`")),
                None => return err(cur.line, col, "expected a term, found end of line"),
            }
            factors += 1;
            cur.skip_ws();
            if cur.peek() == Some('*') {
                cur.bump();
            } else {
                break;
            }
        }
        if factors == 0 {
            return cur.fail("expected a term");
        }
        if negative {
            coeff = -coeff;
        }
        let term = Polynomial::term(Multidegree::new(exps), coeff);
        total = &total + &term;

        first = false;
        cur.skip_ws();
        match cur.peek() {
            Some('+') | Some('-') => continue,
            Some(',') | None => break,
            Some(c) => return cur.fail(format!("unexpected `{c}` after a term")),
        }
    }
    Ok(total)
}

/// Parses a complete-intersection file over the ideal's variables:
///
/// ```text
/// elem: x^2 + y^2
/// coeffs: x, 0, y      # optional; one entry per ideal generator
/// ```
pub fn parse_ci(text: &str, vars: &[String], num_generators: usize) -> PResult<CiFile> {
    let mut elements: Vec<Polynomial> = Vec::new();
    let mut coeff_rows: Vec<Option<Vec<Polynomial>>> = Vec::new();

    for (line_no, body) in content_lines(text) {
        let (key, mut cur) = keyed_line(line_no, body)?;
        match key.as_str() {
            "elem" => {
                let p = parse_polynomial(&mut cur, vars)?;
                if !cur.at_end() {
                    return cur.fail("trailing input after the element");
                }
                if p.is_zero() {
                    return err(line_no, 1, "element is zero");
                }
                elements.push(p);
                coeff_rows.push(None);
            }
            "coeffs" => {
                if elements.is_empty() {
                    return err(line_no, 1, "`coeffs:` line before any `elem:` line");
                }
                if coeff_rows.last().unwrap().is_some() {
                    return err(line_no, 1, "duplicate `coeffs:` line for the same element");
                }
                let mut row = Vec::new();
                loop {
                    let p = parse_polynomial(&mut cur, vars)?;
                    row.push(p);
                    cur.skip_ws();
                    if cur.peek() == Some(',') {
                        cur.bump();
                    } else if cur.at_end() {
                        break;
                    } else {
                        return cur.fail("expected `,` between coefficients");
                    }
                }
                if row.len() != num_generators {
                    return err(
                        line_no,
                        1,
                        format!(
                            "expected {num_generators} coefficients (one per generator), found {}",
                            row.len()
                        ),
                    );
                }
                *coeff_rows.last_mut().unwrap() = Some(row);
            }
            other => {
                return err(line_no, 1, format!("unknown line kind `{other}:` (expected `elem:` or `coeffs:`)"));
            }
        }
    }

    if elements.is_empty() {
        return err(1, 1, "empty file: expected at least one `elem:` line");
    }

    let explicit = coeff_rows.iter().filter(|r| r.is_some()).count();
    let coefficients = if explicit == 0 {
        None
    } else if explicit == elements.len() {
        Some(coeff_rows.into_iter().map(Option::unwrap).collect())
    } else {
        return err(
            1,
            1,
            "either every element must carry a `coeffs:` line or none may",
        );
    };

    Ok(CiFile { elements, coefficients })
}

/// Parses a Morse matching file: one `edge:` line per matched pair,
/// upper cell first.
///
/// ```text
/// edge: 1,2,3 -> 1,3
/// ```
pub fn parse_matching(text: &str, num_generators: usize) -> PResult<MorseMatching> {
    let mut edges: Vec<(IndexSet, IndexSet)> = Vec::new();

    for (line_no, body) in content_lines(text) {
        let (key, mut cur) = keyed_line(line_no, body)?;
        if key != "edge" {
            return err(line_no, 1, format!("unknown line kind `{key}:` (expected `edge:`)"));
        }
        let upper = parse_index_list(&mut cur, num_generators)?;
        cur.expect('-')?;
        cur.expect('>')?;
        let lower = parse_index_list(&mut cur, num_generators)?;
        if !cur.at_end() {
            return cur.fail("trailing input after the edge");
        }
        edges.push((upper, lower));
    }

    Ok(MorseMatching::new(edges))
}

/// Parses `1,2,3` into an index set, checking range and duplicates.
fn parse_index_list(cur: &mut Cursor, num_generators: usize) -> PResult<IndexSet> {
    let mut set = IndexSet::EMPTY;
    loop {
        cur.skip_ws();
        let col = cur.col();
        let n = cur.uint()?;
        let n = usize::try_from(n).unwrap_or(usize::MAX);
        if n < 1 || n > num_generators {
            return err(
                cur.line,
                col,
                format!("index {n} outside 1..={num_generators} (the generator count)"),
            );
        }
        if set.contains(n) {
            return err(cur.line, col, format!("duplicate index {n}"));
        }
        set = set.with(n);
        cur.skip_ws();
        if cur.peek() == Some(',') {
            cur.bump();
        } else {
            break;
        }
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars() -> Vec<String> {
        ["w", "x", "y", "z"].iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_a_well_formed_ideal_file() {
        let file = parse_ideal(
            "# path ideal\nvars: w x y z\ngens: w*x, x*y, y*z\n",
        )
        .unwrap();
        assert_eq!(file.vars, vars());
        assert_eq!(file.ideal.num_generators(), 3);
        assert_eq!(file.ideal.generator(1).exponents(), &[1, 1, 0, 0]);
        assert_eq!(file.ideal.generator(3).exponents(), &[0, 0, 1, 1]);
    }

    #[test]
    fn rejects_unknown_variables_with_position() {
        let e = parse_ideal("vars: x y\ngens: x*q\n").unwrap_err();
        assert_eq!((e.line, e.col), (2, 9));
        assert!(e.message.contains("unknown variable `q`"));
    }

    #[test]
    fn rejects_non_minimal_generators_naming_the_pair() {
        let e = parse_ideal("vars: x y\ngens: x, x*y\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.message.contains("generator 2 (x*y) is divisible by generator 1 (x)"));
    }

    #[test]
    fn parses_polynomials_with_signs_and_rationals() {
        let v = vars();
        let mut cur = Cursor::new(1, "-3/2*x*y + x^2 - 1");
        let p = parse_polynomial(&mut cur, &v).unwrap();
        assert_eq!(p.coefficient(&Multidegree::new(vec![0, 1, 1, 0])), ratio(-3, 2));
        assert_eq!(p.coefficient(&Multidegree::new(vec![0, 2, 0, 0])), ratio(1, 1));
        assert_eq!(p.coefficient(&Multidegree::zero(4)), ratio(-1, 1));
    }

    #[test]
    fn parses_ci_files_with_and_without_coefficients() {
        let v = vars();
        let plain = parse_ci("elem: x^2 + y^2\n", &v, 3).unwrap();
        assert_eq!(plain.elements.len(), 1);
        assert!(plain.coefficients.is_none());

        let explicit = parse_ci("elem: x^2 + y^2\ncoeffs: x, 0, y\n", &v, 3).unwrap();
        let rows = explicit.coefficients.unwrap();
        assert_eq!(rows[0].len(), 3);
        assert!(rows[0][1].is_zero());

        let e = parse_ci("elem: x\ncoeffs: 1, 0\n", &v, 3).unwrap_err();
        assert!(e.message.contains("expected 3 coefficients"));
    }

    #[test]
    fn parses_matching_edges() {
        let m = parse_matching("edge: 1,2,3 -> 1,3\nedge: 2,4 -> 4\n", 4).unwrap();
        assert_eq!(m.len(), 2);
        let (upper, lower) = m.edges()[0];
        assert_eq!(upper.elements(), vec![1, 2, 3]);
        assert_eq!(lower.elements(), vec![1, 3]);

        let e = parse_matching("edge: 1,5 -> 1\n", 4).unwrap_err();
        assert!(e.message.contains("index 5 outside 1..=4"));
    }
}
