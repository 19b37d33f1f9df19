//! The fatarc script language: a small declaration/command DSL.
//!
//! A script is a sequence of statements separated by whitespace, newlines,
//! or `;`. `#` starts a comment running to the end of the line.
//!
//! Declarations (names must be declared before use, each name once):
//!
//! ```text
//! field Q                          # or: field Fp 5
//! ring R = poly(x, y)
//! ideal I = <x^2, x*y> in R
//! scheme X = V(<x*y>) in R
//! fatpoint v = <xi^2>
//! germ g = germ(X, origin)
//! motif M = cone(<x> in R) & !closed(<y> in R) | closed(<x, y> in R)
//! ```
//!
//! When an ideal-like declaration omits `in R`, a fresh ring is built from
//! the variables appearing in its generators, in order of first appearance.
//!
//! Commands:
//!
//! ```text
//! arc X v                          # arc-scheme generators
//! dim X v                          # dimension and defect
//! length v                         # fat-point length
//! basis v                          # good ordered basis (or Gröbner basis of an ideal)
//! series igusa X at g upto 8       # `series` may be omitted before the kind
//! series auto-igusa g upto 3
//! series hilbert g upto 6
//! series hilbert-kunz m in X upto 3
//! series milnor (u^2 - v^3) at g upto 3
//! integrate M over v at 2          # or: integrate M over v symbolic
//! count X over 2 via v             # `via` optional: count rational points instead
//! closure X by (x^2) into T
//! frobenius m in X order 2
//! ```

use std::collections::HashMap;
use std::fmt;

use fatarc_core::polycore::valid_user_variable;
use fatarc_core::polycore::Field;

/// Source position (1-based line and column).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, col {}", self.line, self.col)
    }
}

/// A script-level error carrying the offending source position.
#[derive(Clone, Debug)]
pub struct ScriptError {
    pub span: Span,
    pub msg: String,
}

impl fmt::Display for ScriptError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.msg)
    }
}

impl std::error::Error for ScriptError {}

type PResult<T> = std::result::Result<T, ScriptError>;

/// Coefficient field declaration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldDecl {
    Rationals,
    Prime(u64),
}

/// A raw polynomial expression, parsed against a ring at execution time.
#[derive(Clone, Debug)]
pub struct PolyText {
    pub text: String,
    pub span: Span,
}

/// One atom of a motif expression.
#[derive(Clone, Debug)]
pub enum MotifAtom {
    Closed { gens: Vec<PolyText>, ring: Option<String> },
    Cone { gens: Vec<PolyText>, ring: Option<String> },
    All { ring: String },
    Name(String),
}

#[derive(Clone, Debug)]
pub struct MotifLiteral {
    pub negated: bool,
    pub atom: MotifAtom,
    pub span: Span,
}

/// Union of cells; each cell is an intersection of literals.
#[derive(Clone, Debug)]
pub struct MotifExpr {
    pub cells: Vec<Vec<MotifLiteral>>,
}

/// Reference to a germ: a declared name or an inline `germ(X, origin)`.
#[derive(Clone, Debug)]
pub enum GermRef {
    Name(String),
    AtOrigin(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RealizationRef {
    At(u64),
    Symbolic,
}

#[derive(Clone, Debug)]
pub enum Cmd {
    Arc { scheme: String, fatpoint: String },
    Dim { scheme: String, fatpoint: String },
    Length { name: String },
    Basis { name: String },
    Igusa { scheme: String, germ: GermRef, upto: usize },
    AutoIgusa { germ: GermRef, upto: usize },
    Hilbert { germ: GermRef, upto: usize },
    HilbertKunz { sub: String, ambient: String, upto: usize },
    Milnor { f: PolyText, ring: Option<String>, germ: GermRef, upto: usize },
    Integrate { motif: String, fatpoint: String, realization: RealizationRef },
    Count { name: String, q: u64, via: Option<String> },
    Closure { source: String, images: Vec<PolyText>, target: String },
    Frobenius { sub: String, ambient: String, order: u32 },
}

#[derive(Clone, Debug)]
pub enum StmtKind {
    Field(FieldDecl),
    RingDecl { name: String, vars: Vec<String> },
    IdealDecl { name: String, gens: Vec<PolyText>, ring: Option<String>, scheme: bool },
    FatPointDecl { name: String, gens: Vec<PolyText>, ring: Option<String> },
    GermDecl { name: String, scheme: String },
    MotifDecl { name: String, expr: MotifExpr },
    Command(Cmd),
}

#[derive(Clone, Debug)]
pub struct Stmt {
    pub kind: StmtKind,
    pub span: Span,
}

/// A validated script: the coefficient field plus the statement list
/// (which still includes the `field` node, so that node counts match the
/// source).
#[derive(Clone, Debug)]
pub struct Script {
    pub field: FieldDecl,
    pub stmts: Vec<Stmt>,
}

/// Declared-name kinds, used for reference checking during parsing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Ring,
    Ideal,
    Scheme,
    FatPoint,
    Germ,
    Motif,
}

impl Kind {
    fn label(self) -> &'static str {
        match self {
            Kind::Ring => "ring",
            Kind::Ideal => "ideal",
            Kind::Scheme => "scheme",
            Kind::FatPoint => "fat point",
            Kind::Germ => "germ",
            Kind::Motif => "motif",
        }
    }
}

const KEYWORDS: &[&str] = &[
    "field", "ring", "ideal", "scheme", "fatpoint", "germ", "motif", "arc", "dim", "length",
    "basis", "series", "igusa", "auto-igusa", "hilbert", "hilbert-kunz", "milnor", "integrate",
    "count", "closure", "frobenius", "closed", "cone", "all", "in", "at", "over", "via", "by",
    "into", "order", "upto", "symbolic", "origin", "poly", "V", "Q", "Fp",
];

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    col: u32,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { chars: src.chars().peekable(), line: 1, col: 1 }
    }

    fn span(&self) -> Span {
        Span { line: self.line, col: self.col }
    }

    fn err<T>(&self, span: Span, msg: impl Into<String>) -> PResult<T> {
        Err(ScriptError { span, msg: msg.into() })
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next();
        match c {
            Some('\n') => {
                self.line += 1;
                self.col = 1;
            }
            Some(_) => self.col += 1,
            None => {}
        }
        c
    }

    /// Skip whitespace, statement separators (`;`), and `#` comments.
    fn skip_ws(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() || c == ';' => {
                    self.bump();
                }
                Some('#') => {
                    while let Some(c) = self.peek() {
                        if c == '\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => break,
            }
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.peek().is_none()
    }

    /// Lex an identifier; `-` is allowed inside (for `auto-igusa` etc.) but
    /// declared names are re-validated against the strict variable grammar.
    fn ident(&mut self) -> PResult<(String, Span)> {
        self.skip_ws();
        let span = self.span();
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() => {}
            Some(c) => return self.err(span, format!("expected a name, found `{}`", c)),
            None => return self.err(span, "expected a name, found end of input"),
        }
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '~' {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        Ok((s, span))
    }

    fn expect_word(&mut self, word: &str) -> PResult<Span> {
        let (got, span) = self.ident()?;
        if got == word {
            Ok(span)
        } else {
            self.err(span, format!("expected `{}`, found `{}`", word, got))
        }
    }

    fn expect_sym(&mut self, sym: char) -> PResult<Span> {
        self.skip_ws();
        let span = self.span();
        match self.peek() {
            Some(c) if c == sym => {
                self.bump();
                Ok(span)
            }
            Some(c) => self.err(span, format!("expected `{}`, found `{}`", sym, c)),
            None => self.err(span, format!("expected `{}`, found end of input", sym)),
        }
    }

    fn eat_sym(&mut self, sym: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(sym) {
            self.bump();
            true
        } else {
            false
        }
    }

    /// Peek at the next identifier without consuming anything else; used for
    /// contextual keywords such as the optional `in <ring>` clause.
    fn peek_word(&mut self, word: &str) -> bool {
        self.skip_ws();
        let mut probe = self.chars.clone();
        let mut s = String::new();
        while let Some(&c) = probe.peek() {
            if c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '~' {
                s.push(c);
                probe.next();
            } else {
                break;
            }
        }
        s == word
    }

    fn number(&mut self) -> PResult<(u64, Span)> {
        self.skip_ws();
        let span = self.span();
        let mut s = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if s.is_empty() {
            return self.err(span, "expected a number");
        }
        s.parse::<u64>().map(|n| (n, span)).or_else(|_| self.err(span, "number out of range"))
    }

    /// Capture the comma-separated expressions between `open` and its
    /// matching `close`, honouring nested parentheses inside each entry.
    fn capture_list(&mut self, open: char, close: char) -> PResult<Vec<PolyText>> {
        self.expect_sym(open)?;
        let mut out = Vec::new();
        let mut current = String::new();
        let mut current_span: Option<Span> = None;
        let mut depth = 0usize;
        loop {
            self.skip_ws_in_expr(&mut current);
            let span = self.span();
            match self.peek() {
                None => return self.err(span, format!("unterminated `{}…{}` list", open, close)),
                Some(c) if c == close && depth == 0 => {
                    self.bump();
                    break;
                }
                Some(',') if depth == 0 => {
                    self.bump();
                    push_entry(&mut out, &mut current, &mut current_span, span)?;
                }
                Some(c) => {
                    if c == '(' {
                        depth += 1;
                    } else if c == ')' {
                        if depth == 0 {
                            return self.err(span, "unbalanced `)` in expression");
                        }
                        depth -= 1;
                    }
                    if current_span.is_none() {
                        current_span = Some(span);
                    }
                    current.push(c);
                    self.bump();
                }
            }
        }
        let end = self.span();
        push_entry(&mut out, &mut current, &mut current_span, end)?;
        if out.is_empty() {
            return self.err(end, format!("empty `{}…{}` list", open, close));
        }
        return Ok(out);

        fn push_entry(
            out: &mut Vec<PolyText>,
            current: &mut String,
            current_span: &mut Option<Span>,
            at: Span,
        ) -> PResult<()> {
            let text = current.trim().to_string();
            if text.is_empty() {
                if out.is_empty() && current_span.is_none() {
                    // `<…>` closed with nothing at all: reported by caller.
                    return Ok(());
                }
                return Err(ScriptError { span: at, msg: "empty expression in list".into() });
            }
            let span = current_span.unwrap_or(at);
            out.push(PolyText { text, span });
            current.clear();
            *current_span = None;
            Ok(())
        }
    }

    /// Inside an expression capture, whitespace is kept as a single space so
    /// that spans stay accurate but the text remains parseable.
    fn skip_ws_in_expr(&mut self, current: &mut String) {
        let mut saw = false;
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                saw = true;
                self.bump();
            } else if c == '#' {
                while let Some(c2) = self.peek() {
                    if c2 == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else {
                break;
            }
        }
        if saw && !current.is_empty() {
            current.push(' ');
        }
    }
}

struct Names {
    table: HashMap<String, Kind>,
}

impl Names {
    fn new() -> Self {
        Names { table: HashMap::new() }
    }

    fn declare(&mut self, name: &str, kind: Kind, span: Span) -> PResult<()> {
        if KEYWORDS.contains(&name) {
            return Err(ScriptError {
                span,
                msg: format!("`{}` is a reserved word and cannot be declared", name),
            });
        }
        if !valid_user_variable(name) {
            return Err(ScriptError { span, msg: format!("invalid name `{}`", name) });
        }
        if self.table.contains_key(name) {
            return Err(ScriptError { span, msg: format!("name `{}` already declared", name) });
        }
        self.table.insert(name.to_string(), kind);
        Ok(())
    }

    fn expect(&self, name: &str, kinds: &[Kind], span: Span) -> PResult<()> {
        match self.table.get(name) {
            None => Err(ScriptError { span, msg: format!("undeclared name `{}`", name) }),
            Some(k) if kinds.contains(k) => Ok(()),
            Some(k) => {
                let wanted =
                    kinds.iter().map(|k| k.label()).collect::<Vec<_>>().join(" or ");
                Err(ScriptError {
                    span,
                    msg: format!("`{}` is a {}, expected a {}", name, k.label(), wanted),
                })
            }
        }
    }
}

const IDEAL_LIKE: &[Kind] = &[Kind::Ideal, Kind::Scheme];

/// Parse and validate a script: syntax, declaration order, name kinds, and
/// the single-field rule are all checked here.
pub fn parse_script(source: &str) -> PResult<Script> {
    let mut cur = Cursor::new(source);
    let mut names = Names::new();
    let mut field: Option<FieldDecl> = None;
    let mut stmts: Vec<Stmt> = Vec::new();

    while !cur.at_end() {
        let (word, span) = cur.ident()?;
        let kind = match word.as_str() {
            "field" => {
                if field.is_some() {
                    return cur.err(span, "coefficient field already declared");
                }
                if !stmts.is_empty() {
                    return cur.err(span, "the coefficient field must be declared first");
                }
                let (fw, fspan) = cur.ident()?;
                let decl = match fw.as_str() {
                    "Q" => FieldDecl::Rationals,
                    "Fp" => {
                        let (p, pspan) = cur.number()?;
                        if Field::prime(p).is_err() {
                            return cur.err(pspan, format!("{} is not a prime characteristic", p));
                        }
                        FieldDecl::Prime(p)
                    }
                    other => {
                        return cur.err(fspan, format!("unknown field `{}` (use Q or Fp p)", other))
                    }
                };
                field = Some(decl);
                StmtKind::Field(decl)
            }
            "ring" => {
                let (name, nspan) = cur.ident()?;
                cur.expect_sym('=')?;
                cur.expect_word("poly")?;
                let entries = cur.capture_list('(', ')')?;
                let mut vars = Vec::new();
                for e in entries {
                    if !valid_user_variable(&e.text) {
                        return cur.err(e.span, format!("invalid variable name `{}`", e.text));
                    }
                    vars.push(e.text);
                }
                names.declare(&name, Kind::Ring, nspan)?;
                StmtKind::RingDecl { name, vars }
            }
            "ideal" | "scheme" => {
                let is_scheme = word == "scheme";
                let (name, nspan) = cur.ident()?;
                cur.expect_sym('=')?;
                if is_scheme {
                    cur.expect_word("V")?;
                    cur.expect_sym('(')?;
                }
                let gens = cur.capture_list('<', '>')?;
                if is_scheme {
                    cur.expect_sym(')')?;
                }
                let ring = parse_in_ring(&mut cur, &names)?;
                names.declare(&name, if is_scheme { Kind::Scheme } else { Kind::Ideal }, nspan)?;
                StmtKind::IdealDecl { name, gens, ring, scheme: is_scheme }
            }
            "fatpoint" => {
                let (name, nspan) = cur.ident()?;
                cur.expect_sym('=')?;
                let gens = cur.capture_list('<', '>')?;
                let ring = parse_in_ring(&mut cur, &names)?;
                names.declare(&name, Kind::FatPoint, nspan)?;
                StmtKind::FatPointDecl { name, gens, ring }
            }
            "germ" => {
                let (name, nspan) = cur.ident()?;
                cur.expect_sym('=')?;
                cur.expect_word("germ")?;
                cur.expect_sym('(')?;
                let (scheme, sspan) = cur.ident()?;
                names.expect(&scheme, IDEAL_LIKE, sspan)?;
                cur.expect_sym(',')?;
                cur.expect_word("origin")?;
                cur.expect_sym(')')?;
                names.declare(&name, Kind::Germ, nspan)?;
                StmtKind::GermDecl { name, scheme }
            }
            "motif" => {
                let (name, nspan) = cur.ident()?;
                cur.expect_sym('=')?;
                let expr = parse_motif_expr(&mut cur, &names)?;
                names.declare(&name, Kind::Motif, nspan)?;
                StmtKind::MotifDecl { name, expr }
            }
            _ => StmtKind::Command(parse_command(&word, span, &mut cur, &names)?),
        };
        stmts.push(Stmt { kind, span });
    }

    Ok(Script { field: field.unwrap_or(FieldDecl::Rationals), stmts })
}

fn parse_in_ring(cur: &mut Cursor<'_>, names: &Names) -> PResult<Option<String>> {
    if cur.peek_word("in") {
        cur.expect_word("in")?;
        let (ring, rspan) = cur.ident()?;
        names.expect(&ring, &[Kind::Ring], rspan)?;
        Ok(Some(ring))
    } else {
        Ok(None)
    }
}

fn parse_motif_expr(cur: &mut Cursor<'_>, names: &Names) -> PResult<MotifExpr> {
    let mut cells = vec![parse_motif_cell(cur, names)?];
    while cur.eat_sym('|') {
        cells.push(parse_motif_cell(cur, names)?);
    }
    Ok(MotifExpr { cells })
}

fn parse_motif_cell(cur: &mut Cursor<'_>, names: &Names) -> PResult<Vec<MotifLiteral>> {
    let mut lits = vec![parse_motif_literal(cur, names)?];
    while cur.eat_sym('&') {
        lits.push(parse_motif_literal(cur, names)?);
    }
    Ok(lits)
}

fn parse_motif_literal(cur: &mut Cursor<'_>, names: &Names) -> PResult<MotifLiteral> {
    let negated = cur.eat_sym('!');
    let (word, span) = cur.ident()?;
    let atom = match word.as_str() {
        "closed" | "cone" => {
            cur.expect_sym('(')?;
            let gens = cur.capture_list('<', '>')?;
            let ring = parse_in_ring(cur, names)?;
            cur.expect_sym(')')?;
            if word == "closed" {
                MotifAtom::Closed { gens, ring }
            } else {
                MotifAtom::Cone { gens, ring }
            }
        }
        "all" => {
            cur.expect_word("in")?;
            let (ring, rspan) = cur.ident()?;
            names.expect(&ring, &[Kind::Ring], rspan)?;
            MotifAtom::All { ring }
        }
        name => {
            if negated {
                return cur.err(span, "negation applies to closed/cone atoms, not motif names");
            }
            names.expect(name, &[Kind::Motif], span)?;
            MotifAtom::Name(name.to_string())
        }
    };
    Ok(MotifLiteral { negated, atom, span })
}

fn parse_germ_ref(cur: &mut Cursor<'_>, names: &Names) -> PResult<GermRef> {
    let (word, span) = cur.ident()?;
    if word == "germ" {
        cur.expect_sym('(')?;
        let (scheme, sspan) = cur.ident()?;
        names.expect(&scheme, IDEAL_LIKE, sspan)?;
        cur.expect_sym(',')?;
        cur.expect_word("origin")?;
        cur.expect_sym(')')?;
        Ok(GermRef::AtOrigin(scheme))
    } else {
        names.expect(&word, &[Kind::Germ], span)?;
        Ok(GermRef::Name(word))
    }
}

fn parse_upto(cur: &mut Cursor<'_>) -> PResult<usize> {
    cur.expect_word("upto")?;
    let (n, span) = cur.number()?;
    if n == 0 {
        return cur.err(span, "truncation must be at least 1");
    }
    usize::try_from(n).or_else(|_| cur.err(span, "truncation out of range"))
}

fn parse_command(word: &str, span: Span, cur: &mut Cursor<'_>, names: &Names) -> PResult<Cmd> {
    let mut kind = word.to_string();
    if kind == "series" {
        let (k, kspan) = cur.ident()?;
        match k.as_str() {
            "igusa" | "auto-igusa" | "hilbert" | "hilbert-kunz" | "milnor" => kind = k,
            other => {
                return cur.err(
                    kspan,
                    format!(
                        "unknown series kind `{}` (igusa, auto-igusa, hilbert, hilbert-kunz, milnor)",
                        other
                    ),
                )
            }
        }
    }
    match kind.as_str() {
        "arc" | "dim" => {
            let (scheme, sspan) = cur.ident()?;
            names.expect(&scheme, IDEAL_LIKE, sspan)?;
            let (fp, fspan) = cur.ident()?;
            names.expect(&fp, &[Kind::FatPoint], fspan)?;
            Ok(if kind == "arc" {
                Cmd::Arc { scheme, fatpoint: fp }
            } else {
                Cmd::Dim { scheme, fatpoint: fp }
            })
        }
        "length" => {
            let (name, nspan) = cur.ident()?;
            names.expect(&name, &[Kind::FatPoint], nspan)?;
            Ok(Cmd::Length { name })
        }
        "basis" => {
            let (name, nspan) = cur.ident()?;
            names.expect(&name, &[Kind::FatPoint, Kind::Ideal, Kind::Scheme], nspan)?;
            Ok(Cmd::Basis { name })
        }
        "igusa" => {
            let (scheme, sspan) = cur.ident()?;
            names.expect(&scheme, IDEAL_LIKE, sspan)?;
            cur.expect_word("at")?;
            let germ = parse_germ_ref(cur, names)?;
            let upto = parse_upto(cur)?;
            Ok(Cmd::Igusa { scheme, germ, upto })
        }
        "auto-igusa" => {
            let germ = parse_germ_ref(cur, names)?;
            let upto = parse_upto(cur)?;
            Ok(Cmd::AutoIgusa { germ, upto })
        }
        "hilbert" => {
            let germ = parse_germ_ref(cur, names)?;
            let upto = parse_upto(cur)?;
            Ok(Cmd::Hilbert { germ, upto })
        }
        "hilbert-kunz" => {
            let (sub, sspan) = cur.ident()?;
            names.expect(&sub, IDEAL_LIKE, sspan)?;
            cur.expect_word("in")?;
            let (ambient, aspan) = cur.ident()?;
            names.expect(&ambient, IDEAL_LIKE, aspan)?;
            let upto = parse_upto(cur)?;
            Ok(Cmd::HilbertKunz { sub, ambient, upto })
        }
        "milnor" => {
            let mut exprs = cur.capture_list('(', ')')?;
            if exprs.len() != 1 {
                return cur.err(span, "milnor expects a single polynomial in parentheses");
            }
            let f = exprs.remove(0);
            let ring = parse_in_ring(cur, names)?;
            cur.expect_word("at")?;
            let germ = parse_germ_ref(cur, names)?;
            let upto = parse_upto(cur)?;
            Ok(Cmd::Milnor { f, ring, germ, upto })
        }
        "integrate" => {
            let (motif, mspan) = cur.ident()?;
            names.expect(&motif, &[Kind::Motif], mspan)?;
            cur.expect_word("over")?;
            let (fp, fspan) = cur.ident()?;
            names.expect(&fp, &[Kind::FatPoint], fspan)?;
            let (mode, mspan2) = cur.ident()?;
            let realization = match mode.as_str() {
                "at" => RealizationRef::At(cur.number()?.0),
                "symbolic" => RealizationRef::Symbolic,
                other => {
                    return cur.err(mspan2, format!("expected `at q` or `symbolic`, found `{}`", other))
                }
            };
            Ok(Cmd::Integrate { motif, fatpoint: fp, realization })
        }
        "count" => {
            let (name, nspan) = cur.ident()?;
            names.expect(&name, &[Kind::Ideal, Kind::Scheme, Kind::Motif], nspan)?;
            cur.expect_word("over")?;
            let (q, _) = cur.number()?;
            let via = if cur.peek_word("via") {
                cur.expect_word("via")?;
                let (fp, fspan) = cur.ident()?;
                names.expect(&fp, &[Kind::FatPoint], fspan)?;
                Some(fp)
            } else {
                None
            };
            Ok(Cmd::Count { name, q, via })
        }
        "closure" => {
            let (source, sspan) = cur.ident()?;
            names.expect(&source, IDEAL_LIKE, sspan)?;
            cur.expect_word("by")?;
            let images = cur.capture_list('(', ')')?;
            cur.expect_word("into")?;
            let (target, tspan) = cur.ident()?;
            names.expect(&target, &[Kind::Ring], tspan)?;
            Ok(Cmd::Closure { source, images, target })
        }
        "frobenius" => {
            let (sub, sspan) = cur.ident()?;
            names.expect(&sub, IDEAL_LIKE, sspan)?;
            cur.expect_word("in")?;
            let (ambient, aspan) = cur.ident()?;
            names.expect(&ambient, IDEAL_LIKE, aspan)?;
            cur.expect_word("order")?;
            let (n, nspan) = cur.number()?;
            let order =
                u32::try_from(n).or_else(|_| cur.err(nspan, "Frobenius order out of range"))?;
            Ok(Cmd::Frobenius { sub, ambient, order })
        }
        other => Err(ScriptError { span, msg: format!("unknown statement `{}`", other) }),
    }
}
