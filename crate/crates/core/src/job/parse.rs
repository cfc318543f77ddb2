use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use super::{Command, Item, JobError, JobFile, LiftChoice, MapRef, ModuleSpec, OpRef};
use crate::poly::{PolyError, PolyRing, TermOrder};

type Loc = (usize, usize);
type PResult<T> = Result<T, JobError>;

#[derive(Clone, Copy)]
struct State {
    pos: usize,
    line: usize,
    col: usize,
}

struct Scanner {
    chars: Vec<char>,
    st: State,
    /// Inside `{ ... }` newlines are ordinary whitespace.
    block: bool,
}

fn syntax((line, col): Loc, message: impl Into<String>) -> JobError {
    JobError::Syntax { line, col, message: message.into() }
}

fn invalid((line, col): Loc, message: impl Into<String>) -> JobError {
    JobError::Invalid { line, col, message: message.into() }
}

fn undefined((line, col): Loc, name: &str) -> JobError {
    JobError::Undefined { line, col, name: name.to_string() }
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_') && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Scanner {
    fn new(text: &str) -> Self {
        Scanner {
            chars: text.chars().collect(),
            st: State { pos: 0, line: 1, col: 1 },
            block: false,
        }
    }

    fn loc(&self) -> Loc {
        (self.st.line, self.st.col)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.st.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.st.pos += 1;
        if c == '\n' {
            self.st.line += 1;
            self.st.col = 1;
        } else {
            self.st.col += 1;
        }
        Some(c)
    }

    fn skip_comment(&mut self) {
        while !matches!(self.peek(), None | Some('\n')) {
            self.bump();
        }
    }

    fn skip_ws(&mut self) {
        loop {
            match self.peek() {
                Some(' ' | '\t' | '\r') => {
                    self.bump();
                }
                Some('\n') if self.block => {
                    self.bump();
                }
                Some('#') if self.block => self.skip_comment(),
                _ => break,
            }
        }
    }

    fn skip_blank(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') => self.skip_comment(),
                _ => break,
            }
        }
    }

    fn at_eol(&mut self) -> bool {
        self.skip_ws();
        matches!(self.peek(), None | Some('\n' | '#'))
    }

    fn end_statement(&mut self) -> PResult<()> {
        if self.at_eol() {
            Ok(())
        } else {
            Err(syntax(self.loc(), format!("unexpected `{}`", self.peek().unwrap())))
        }
    }

    fn word(&mut self) -> PResult<(String, Loc)> {
        self.skip_ws();
        let loc = self.loc();
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' || c == '-' {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if s.is_empty() {
            let found = self.peek().map(|c| format!("`{c}`")).unwrap_or_else(|| "end of input".into());
            return Err(syntax(loc, format!("expected a word, found {found}")));
        }
        Ok((s, loc))
    }

    fn peek_word(&mut self) -> Option<String> {
        let saved = self.st;
        let w = self.word().ok().map(|(w, _)| w);
        self.st = saved;
        w
    }

    fn ident(&mut self, what: &str) -> PResult<(String, Loc)> {
        let (w, loc) = self.word()?;
        if !is_ident(&w) {
            return Err(syntax(loc, format!("`{w}` is not a valid {what} name")));
        }
        Ok((w, loc))
    }

    fn keyword(&mut self, kw: &str) -> PResult<Loc> {
        let saved = self.st;
        match self.word() {
            Ok((w, loc)) if w == kw => Ok(loc),
            Ok((w, loc)) => {
                self.st = saved;
                Err(syntax(loc, format!("expected `{kw}`, found `{w}`")))
            }
            Err(_) => Err(syntax(self.loc(), format!("expected `{kw}`"))),
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            let found = self.peek().map(|c| format!("`{c}`")).unwrap_or_else(|| "end of line".into());
            Err(syntax(self.loc(), format!("expected `{c}`, found {found}")))
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> PResult<i64> {
        self.skip_ws();
        let loc = self.loc();
        let mut s = String::new();
        if let Some(c @ ('-' | '+')) = self.peek() {
            s.push(c);
            self.bump();
        }
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            s.push(c);
            self.bump();
        }
        s.parse().map_err(|_| syntax(loc, "expected an integer"))
    }

    /// An expression up to one of `stops` at parenthesis depth 0, or the end of
    /// the statement. With `flags`, whitespace followed by `--` or `as ` also ends it.
    fn raw(&mut self, stops: &[char], flags: bool) -> PResult<(String, Loc)> {
        self.skip_ws();
        let loc = self.loc();
        let mut s = String::new();
        let mut depth = 0usize;
        while let Some(c) = self.peek() {
            if depth == 0 && stops.contains(&c) {
                break;
            }
            if !self.block && matches!(c, '\n' | '#') {
                break;
            }
            if flags && c.is_whitespace() {
                let rest: String = self.chars[self.st.pos..].iter().take(64).collect();
                let rest = rest.trim_start();
                if rest.starts_with("--") || rest.starts_with("as ") || rest.starts_with("as\t") {
                    break;
                }
            }
            match c {
                '(' => depth += 1,
                ')' if depth > 0 => depth -= 1,
                _ => {}
            }
            s.push(c);
            self.bump();
        }
        let s = s.trim().to_string();
        if s.is_empty() {
            return Err(syntax(loc, "expected an expression"));
        }
        Ok((s, loc))
    }

    /// `[[p, ...], [...]]`; `[]` is the matrix with no rows.
    fn matrix(&mut self) -> PResult<Vec<Vec<String>>> {
        let was = self.block;
        self.block = true;
        let out = self.matrix_inner();
        self.block = was;
        out
    }

    fn matrix_inner(&mut self) -> PResult<Vec<Vec<String>>> {
        self.expect('[')?;
        let mut rows = Vec::new();
        if self.eat(']') {
            return Ok(rows);
        }
        loop {
            self.expect('[')?;
            let mut row = Vec::new();
            if !self.eat(']') {
                loop {
                    row.push(self.raw(&[',', ']'], false)?.0);
                    if self.eat(']') {
                        break;
                    }
                    self.expect(',')?;
                }
            }
            rows.push(row);
            if self.eat(']') {
                return Ok(rows);
            }
            self.expect(',')?;
        }
    }
}

struct RingInfo {
    poly: Arc<PolyRing>,
    graded: bool,
}

struct Names {
    /// Off only for syntax-level round trips.
    checked: bool,
    dummy: RingInfo,
    rings: HashMap<String, RingInfo>,
    elems: HashMap<String, String>,
    complexes: HashMap<String, String>,
    bundles: HashSet<String>,
    any_bundle: bool,
}

impl Names {
    fn new(checked: bool) -> Self {
        Names {
            checked,
            dummy: RingInfo {
                poly: PolyRing::new(Vec::new(), Vec::new(), TermOrder::GrevLex).expect("empty ring"),
                graded: false,
            },
            rings: HashMap::new(),
            elems: HashMap::new(),
            complexes: HashMap::new(),
            bundles: HashSet::new(),
            any_bundle: false,
        }
    }

    fn define(&self, name: &str, loc: Loc) -> PResult<()> {
        if !self.checked {
            return Ok(());
        }
        if self.rings.contains_key(name)
            || self.elems.contains_key(name)
            || self.complexes.contains_key(name)
            || self.bundles.contains(name)
        {
            return Err(invalid(loc, format!("`{name}` is already defined")));
        }
        Ok(())
    }

    fn ring(&self, name: &str, loc: Loc) -> PResult<&RingInfo> {
        if !self.checked {
            return Ok(self.rings.get(name).unwrap_or(&self.dummy));
        }
        self.rings.get(name).ok_or_else(|| undefined(loc, name))
    }

    fn check_poly(&self, ring: &str, text: &str, loc: Loc) -> PResult<()> {
        if !self.checked {
            return Ok(());
        }
        let info = self.ring(ring, loc)?;
        if is_ident(text) && info.poly.var_index(text).is_none() {
            return Err(undefined(loc, text));
        }
        match info.poly.parse(text) {
            Ok(p) if info.graded && !p.is_homogeneous() => {
                Err(invalid(loc, format!("`{text}` is inhomogeneous in graded ring {ring}")))
            }
            Ok(_) => Ok(()),
            Err(PolyError::UnknownVariable(v)) => Err(undefined(loc, &v)),
            Err(PolyError::Parse { offset, message }) => Err(syntax((loc.0, loc.1 + offset), message)),
            Err(e) => Err(syntax(loc, e.to_string())),
        }
    }

    /// A bound element name usable in `ring`, or a polynomial over it.
    fn check_elem(&self, ring: &str, text: &str, loc: Loc) -> PResult<()> {
        if !self.checked {
            return Ok(());
        }
        if let Some(home) = self.elems.get(text) {
            let a = self.ring(ring, loc)?.poly.names();
            if a != self.rings[home].poly.names() {
                return Err(invalid(loc, format!("element `{text}` of {home} cannot be read in {ring}")));
            }
            return Ok(());
        }
        self.check_poly(ring, text, loc)
    }
}

/// Parses and name-checks a job file.
pub fn parse_jobfile(text: &str) -> Result<JobFile, JobError> {
    parse_with(text, true)
}

/// Grammar only; names are not resolved.
#[cfg(test)]
pub(crate) fn parse_unchecked(text: &str) -> Result<JobFile, JobError> {
    parse_with(text, false)
}

fn parse_with(text: &str, checked: bool) -> Result<JobFile, JobError> {
    let mut sc = Scanner::new(text);
    let mut names = Names::new(checked);
    let mut items = Vec::new();
    loop {
        sc.skip_blank();
        if sc.peek().is_none() {
            break;
        }
        let (kw, loc) = sc.word()?;
        let item = match kw.as_str() {
            "ring" => ring(&mut sc, &mut names)?,
            "elem" => elem(&mut sc, &mut names)?,
            "quotient" => quotient(&mut sc, &mut names)?,
            "complex" => complex(&mut sc, &mut names)?,
            "check" => {
                sc.keyword("ezd")?;
                let (ring, rl) = sc.ident("ring")?;
                names.ring(&ring, rl)?;
                let (x, xl) = sc.raw(&[' ', '\t'], false)?;
                names.check_elem(&ring, &x, xl)?;
                let (y, yl) = sc.raw(&[' ', '\t'], false)?;
                names.check_elem(&ring, &y, yl)?;
                Item::Command(Command::CheckEzd { ring, x, y })
            }
            "ann" => {
                let (elem, el) = sc.raw(&[' ', '\t'], false)?;
                sc.keyword("in")?;
                let (ring, rl) = sc.ident("ring")?;
                names.ring(&ring, rl)?;
                names.check_elem(&ring, &elem, el)?;
                Item::Command(Command::Ann { elem, ring })
            }
            "resolve" => resolve(&mut sc, &mut names)?,
            "operators" => operators(&mut sc, &mut names)?,
            "homotopy" => homotopy(&mut sc, &names)?,
            "reproduce-example" => {
                let mut dmax = None;
                while !sc.at_eol() {
                    let (flag, fl) = sc.word()?;
                    match flag.as_str() {
                        "--dmax" => dmax = Some(sc.int()?),
                        _ => return Err(syntax(fl, format!("unknown flag `{flag}`"))),
                    }
                }
                Item::Command(Command::ReproduceExample { dmax })
            }
            _ => return Err(syntax(loc, format!("unknown statement `{kw}`"))),
        };
        sc.end_statement()?;
        items.push(item);
    }
    Ok(JobFile { items })
}

fn ring(sc: &mut Scanner, names: &mut Names) -> PResult<Item> {
    let (name, loc) = sc.ident("ring")?;
    names.define(&name, loc)?;
    sc.keyword("vars")?;
    let mut vars: Vec<(String, u32)> = Vec::new();
    loop {
        let (v, vl) = sc.ident("variable")?;
        if vars.iter().any(|(w, _)| *w == v) {
            return Err(invalid(vl, format!("repeated variable `{v}`")));
        }
        sc.expect(':')?;
        let dl = {
            sc.skip_ws();
            sc.loc()
        };
        let d = sc.int()?;
        if d <= 0 || d > u32::MAX as i64 {
            return Err(invalid(dl, format!("variable `{v}` needs a positive degree")));
        }
        vars.push((v, d as u32));
        if !sc.eat(',') {
            break;
        }
    }
    let mut graded = true;
    if sc.peek_word().as_deref() == Some("ungraded") {
        sc.word()?;
        graded = false;
    }
    let mut relations = Vec::new();
    let poly = PolyRing::new(
        vars.iter().map(|(v, _)| v.clone()).collect(),
        vars.iter().map(|(_, d)| *d).collect(),
        TermOrder::GrevLex,
    )
    .map_err(|e| invalid(loc, e.to_string()))?;
    names.rings.insert(name.clone(), RingInfo { poly, graded });
    if !sc.at_eol() {
        sc.keyword("mod")?;
        loop {
            let (r, rl) = sc.raw(&[';'], false)?;
            names.check_poly(&name, &r, rl)?;
            relations.push(r);
            if !sc.eat(';') {
                break;
            }
        }
    }
    Ok(Item::Ring { name, vars, relations, graded })
}

fn elem(sc: &mut Scanner, names: &mut Names) -> PResult<Item> {
    let (name, loc) = sc.ident("element")?;
    names.define(&name, loc)?;
    sc.keyword("in")?;
    let (ring, rl) = sc.ident("ring")?;
    names.ring(&ring, rl)?;
    sc.expect('=')?;
    let (poly, pl) = sc.raw(&[], false)?;
    names.check_poly(&ring, &poly, pl)?;
    names.elems.insert(name.clone(), ring.clone());
    Ok(Item::Elem { name, ring, poly })
}

fn quotient(sc: &mut Scanner, names: &mut Names) -> PResult<Item> {
    let (name, loc) = sc.ident("ring")?;
    names.define(&name, loc)?;
    sc.expect('=')?;
    let (ring, rl) = sc.ident("ring")?;
    let info = names.ring(&ring, rl)?;
    let (poly, graded) = (info.poly.clone(), info.graded);
    sc.expect('/')?;
    let (elem, el) = sc.raw(&[], false)?;
    names.check_elem(&ring, &elem, el)?;
    names.rings.insert(name.clone(), RingInfo { poly, graded });
    Ok(Item::Quotient { name, ring, elem })
}

fn twist_list(sc: &mut Scanner) -> PResult<Vec<i64>> {
    sc.expect('[')?;
    let mut out = Vec::new();
    if sc.eat(']') {
        return Ok(out);
    }
    loop {
        let t = sc.int()?;
        let reps = if sc.eat('^') {
            let rl = sc.loc();
            let k = sc.int()?;
            if k < 1 {
                return Err(invalid(rl, "multiplicity must be positive"));
            }
            k as usize
        } else {
            1
        };
        out.extend(std::iter::repeat_n(t, reps));
        if sc.eat(']') {
            return Ok(out);
        }
        sc.expect(',')?;
    }
}

fn complex(sc: &mut Scanner, names: &mut Names) -> PResult<Item> {
    let (name, loc) = sc.ident("complex")?;
    names.define(&name, loc)?;
    sc.keyword("over")?;
    let (ring, rl) = sc.ident("ring")?;
    names.ring(&ring, rl)?;
    sc.expect('{')?;
    sc.block = true;
    let mut modules: Vec<(i64, Vec<i64>)> = Vec::new();
    let mut maps: Vec<(i64, Vec<Vec<String>>, Loc)> = Vec::new();
    loop {
        sc.skip_ws();
        if sc.eat('}') {
            break;
        }
        if sc.eat(';') {
            continue;
        }
        if sc.peek().is_none() {
            sc.block = false;
            return Err(syntax(sc.loc(), "unterminated complex block"));
        }
        let (kw, kl) = sc.word()?;
        match kw.as_str() {
            "module" => {
                let i = sc.int()?;
                if modules.iter().any(|(j, _)| *j == i) {
                    sc.block = false;
                    return Err(invalid(kl, format!("module {i} given twice")));
                }
                sc.keyword("twists")?;
                modules.push((i, twist_list(sc)?));
            }
            "map" => {
                let (d, dl) = sc.word()?;
                let i = d
                    .strip_prefix('d')
                    .and_then(|s| s.parse::<i64>().ok())
                    .ok_or_else(|| syntax(dl, format!("expected d<index>, found `{d}`")))?;
                sc.expect('=')?;
                let m = sc.matrix()?;
                maps.push((i, m, dl));
            }
            _ => {
                sc.block = false;
                return Err(syntax(kl, format!("expected `module` or `map`, found `{kw}`")));
            }
        }
    }
    sc.block = false;
    modules.sort_by_key(|(i, _)| *i);
    if let Some(w) = modules.windows(2).find(|w| w[1].0 != w[0].0 + 1) {
        return Err(invalid(loc, format!("modules must be consecutive; {} is followed by {}", w[0].0, w[1].0)));
    }
    let rank = |i: i64| modules.iter().find(|(j, _)| *j == i).map(|(_, t)| t.len());
    for (i, m, dl) in &maps {
        let (Some(cols), Some(rows)) = (rank(*i), rank(i - 1)) else {
            return Err(invalid(*dl, format!("map d{i} needs modules {} and {i}", i - 1)));
        };
        let shape_ok = m.len() == rows && m.iter().all(|r| r.len() == cols);
        if !shape_ok && !(rows == 0 && m.is_empty()) {
            return Err(invalid(*dl, format!("map d{i} must be {rows} x {cols}")));
        }
        for entry in m.iter().flatten() {
            names.check_poly(&ring, entry, *dl)?;
        }
    }
    let mut seen = HashSet::new();
    for (i, _, dl) in &maps {
        if !seen.insert(*i) {
            return Err(invalid(*dl, format!("map d{i} given twice")));
        }
    }
    names.complexes.insert(name.clone(), ring.clone());
    let mut maps: Vec<(i64, Vec<Vec<String>>)> = maps.into_iter().map(|(i, m, _)| (i, m)).collect();
    maps.sort_by_key(|(i, _)| *i);
    Ok(Item::Complex { name, ring, modules, maps })
}

fn resolve(sc: &mut Scanner, names: &mut Names) -> PResult<Item> {
    let (ring, rl) = sc.ident("ring")?;
    names.ring(&ring, rl)?;
    sc.expect('/')?;
    sc.skip_ws();
    let module = if sc.peek() == Some('[') {
        let ml = sc.loc();
        let m = sc.matrix()?;
        if m.len() != 1 {
            return Err(invalid(ml, "module relations must be a single row"));
        }
        for e in &m[0] {
            names.check_poly(&ring, e, ml)?;
        }
        ModuleSpec::Matrix(m)
    } else {
        let (e, el) = sc.raw(&[], true)?;
        names.check_elem(&ring, &e, el)?;
        ModuleSpec::Elem(e)
    };
    let (mut hmax, mut dmax, mut name) = (None, None, None);
    while !sc.at_eol() {
        let (flag, fl) = sc.word()?;
        match flag.as_str() {
            "--hmax" => hmax = Some(sc.int()?),
            "--dmax" => dmax = Some(sc.int()?),
            "as" => {
                let (n, nl) = sc.ident("complex")?;
                names.define(&n, nl)?;
                names.complexes.insert(n.clone(), ring.clone());
                name = Some(n);
            }
            _ => return Err(syntax(fl, format!("unknown flag `{flag}`"))),
        }
    }
    let here = sc.loc();
    Ok(Item::Command(Command::Resolve {
        ring,
        module,
        hmax: hmax.ok_or_else(|| syntax(here, "missing --hmax"))?,
        dmax: dmax.ok_or_else(|| syntax(here, "missing --dmax"))?,
        name,
    }))
}

fn operators(sc: &mut Scanner, names: &mut Names) -> PResult<Item> {
    sc.keyword("build")?;
    let (complex, cl) = sc.ident("complex")?;
    let ring = match names.complexes.get(&complex) {
        Some(r) => r.clone(),
        None if !names.checked => String::new(),
        None => return Err(undefined(cl, &complex)),
    };
    sc.keyword("pair")?;
    // x and y live in the ring the complex's ring is a quotient of; checked when run.
    let (x, _) = sc.raw(&[',', ' ', '\t'], false)?;
    sc.expect(',')?;
    let (y, _) = sc.raw(&[' ', '\t'], false)?;
    let mut zs = Vec::new();
    let zpart = sc.peek_word();
    if zpart.as_deref() == Some("z") {
        sc.word()?;
        loop {
            let (z, zl) = sc.raw(&[','], true)?;
            names.check_elem(&ring, &z, zl)?;
            zs.push(z);
            if !sc.eat(',') {
                break;
            }
        }
    }
    let mut lift = LiftChoice::Canonical;
    let mut name = None;
    while !sc.at_eol() {
        let (flag, fl) = sc.word()?;
        match flag.as_str() {
            "--seed" => {
                let sl = sc.loc();
                let s = sc.int()?;
                lift = LiftChoice::Random(Some(u64::try_from(s).map_err(|_| invalid(sl, "seed must be nonnegative"))?));
            }
            "--random" => {
                if lift == LiftChoice::Canonical {
                    lift = LiftChoice::Random(None);
                }
            }
            "as" => {
                let (n, nl) = sc.ident("bundle")?;
                names.define(&n, nl)?;
                names.bundles.insert(n.clone());
                name = Some(n);
            }
            _ => return Err(syntax(fl, format!("unknown flag `{flag}`"))),
        }
    }
    names.any_bundle = true;
    Ok(Item::Command(Command::OperatorsBuild { complex, x, y, zs, lift, name }))
}

fn homotopy(sc: &mut Scanner, names: &Names) -> PResult<Item> {
    sc.keyword("check")?;
    let (first, fl) = sc.ident("map")?;
    let (bundle, op, ol) = if sc.peek() == Some('.') {
        sc.bump();
        if names.checked && !names.bundles.contains(&first) {
            return Err(undefined(fl, &first));
        }
        let (op, ol) = sc.ident("operator")?;
        (Some(first), op, ol)
    } else {
        if names.checked && !names.any_bundle {
            return Err(invalid(fl, "no operators have been built yet"));
        }
        (None, first, fl)
    };
    let op = match op.as_str() {
        "phi" => OpRef::Phi,
        "psi" => {
            if sc.peek() != Some('(') {
                return Err(syntax(sc.loc(), "expected `(` after psi"));
            }
            sc.bump();
            let (z, _) = sc.raw(&[')'], false)?;
            sc.expect(')')?;
            OpRef::Psi(z)
        }
        _ => return Err(syntax(ol, format!("expected `phi` or `psi(...)`, found `{op}`"))),
    };
    let mut window = None;
    let mut flipped = false;
    while !sc.at_eol() {
        let (flag, fl) = sc.word()?;
        match flag.as_str() {
            "--window" => {
                let a = sc.int()?;
                sc.expect(':')?;
                let b = sc.int()?;
                if a > b {
                    return Err(invalid(fl, format!("empty window {a}:{b}")));
                }
                window = Some((a, b));
            }
            "--convention" => {
                let (c, cl) = sc.word()?;
                flipped = match c.as_str() {
                    "standard" => false,
                    "flipped" => true,
                    _ => return Err(syntax(cl, format!("unknown convention `{c}`"))),
                };
            }
            _ => return Err(syntax(fl, format!("unknown flag `{flag}`"))),
        }
    }
    let here = sc.loc();
    Ok(Item::Command(Command::HomotopyCheck {
        map: MapRef { bundle, op },
        window: window.ok_or_else(|| syntax(here, "missing --window"))?,
        flipped,
    }))
}
