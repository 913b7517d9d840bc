use num_traits::{Signed, Zero};
use tfr_exact::{parse_rational, Rational};

use super::expr::Expr;
use super::lex::{tokenize, Cursor, Tok};
use super::{Complex, CrnModel, GenericModel, Model, ModelError, ModelKind, Reaction, Species, Speed, UserReduction};

const MAX_STOICH: u64 = 1_000_000;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Section {
    None,
    Reactions(Speed),
    P,
    Mu,
    H1,
    Phi,
    L,
}

#[derive(Default)]
struct Builder {
    species: Vec<Species>,
    declared: bool,
    reactions: Vec<Reaction>,
    fast_nodes: Vec<Complex>,
    generic: bool,
    vars: Option<Vec<String>>,
    p: Vec<Vec<Expr>>,
    mu: Vec<Expr>,
    h1: Vec<Expr>,
    params: Vec<String>,
    phi: Option<Vec<Expr>>,
    l: Option<Vec<Vec<Expr>>>,
    epsilon: Option<Rational>,
    any_generic_section: bool,
}

/// Parses the model text format described in the module docs.
pub fn parse_model(text: &str) -> Result<Model, ModelError> {
    let mut b = Builder::default();
    let mut section = Section::None;
    let mut saw_content = false;
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        saw_content = true;
        let lead = content.len() - content.trim_start().len();
        let body = content.trim_start();
        if let Some(directive) = body.strip_prefix('@') {
            let word_len = directive.find(char::is_whitespace).unwrap_or(directive.len());
            let word = &directive[..word_len];
            let rest = &directive[word_len..];
            let rest_col = lead + 2 + word_len;
            section = b.directive(word, rest, line, lead + 1, rest_col, section)?;
            if !rest.trim().is_empty() && section != Section::None {
                b.section_line(section, rest, line, rest_col)?;
            }
            continue;
        }
        b.section_line(section, content, line, 1)?;
    }
    if !saw_content {
        return Err(ModelError::Empty);
    }
    b.finish()
}

fn names(rest: &str, line: usize, col0: usize) -> Result<Vec<String>, ModelError> {
    let toks = tokenize(rest, line, col0)?;
    let mut out = Vec::new();
    for t in toks {
        match t.tok {
            Tok::Ident(s) => out.push(s),
            Tok::Comma => {}
            Tok::End => break,
            other => return Err(ModelError::syntax(t.line, t.col, format!("expected a name, found {}", other.describe()))),
        }
    }
    Ok(out)
}

impl Builder {
    fn directive(
        &mut self,
        word: &str,
        rest: &str,
        line: usize,
        col: usize,
        rest_col: usize,
        current: Section,
    ) -> Result<Section, ModelError> {
        let inline_ok = |s: Section| Ok(s);
        match word {
            "species" => {
                if !self.reactions.is_empty() {
                    return Err(ModelError::Invalid { line, message: "@species must precede the reactions".into() });
                }
                for name in names(rest, line, rest_col)? {
                    if self.species.iter().any(|s| s.name == name) {
                        return Err(ModelError::DuplicateSpecies { name, line });
                    }
                    let index = self.species.len();
                    self.species.push(Species { name, index });
                }
                self.declared = true;
                Ok(Section::None)
            }
            "fast" => inline_ok(Section::Reactions(Speed::Fast)),
            "slow" => inline_ok(Section::Reactions(Speed::Slow)),
            "generic" => {
                self.generic = true;
                Ok(Section::None)
            }
            "vars" => {
                let vs = names(rest, line, rest_col)?;
                for (i, v) in vs.iter().enumerate() {
                    if vs[..i].contains(v) {
                        return Err(ModelError::DuplicateSpecies { name: v.clone(), line });
                    }
                }
                self.vars = Some(vs);
                self.any_generic_section = true;
                Ok(Section::None)
            }
            "params" => {
                self.params = names(rest, line, rest_col)?;
                Ok(Section::None)
            }
            "fastnodes" => {
                for item in rest.split_whitespace() {
                    let offset = rest.find(item).unwrap_or(0);
                    let mut cur = Cursor::new(tokenize(item, line, rest_col + offset)?);
                    let c = self.parse_complex(&mut cur)?;
                    if !cur.at_end() {
                        return Err(cur.unexpected("expected end of complex"));
                    }
                    self.fast_nodes.push(c);
                }
                Ok(Section::None)
            }
            "epsilon" => {
                let text = rest.trim();
                let q = parse_rational(text).map_err(|e| ModelError::syntax(line, rest_col, e.to_string()))?;
                if !q.is_positive() {
                    return Err(ModelError::Invalid { line, message: "epsilon must be positive".into() });
                }
                self.epsilon = Some(q);
                Ok(Section::None)
            }
            "P" => {
                self.any_generic_section = true;
                Ok(Section::P)
            }
            "mu" => {
                self.any_generic_section = true;
                Ok(Section::Mu)
            }
            "h1" => {
                self.any_generic_section = true;
                Ok(Section::H1)
            }
            "phi" => {
                self.phi.get_or_insert_with(Vec::new);
                Ok(Section::Phi)
            }
            "L" => {
                self.l.get_or_insert_with(Vec::new);
                Ok(Section::L)
            }
            _ => {
                let _ = current;
                Err(ModelError::syntax(line, col, format!("unknown directive '@{word}'")))
            }
        }
    }

    fn section_line(&mut self, section: Section, text: &str, line: usize, col0: usize) -> Result<(), ModelError> {
        let toks = tokenize(text, line, col0)?;
        let mut cur = Cursor::new(toks);
        match section {
            Section::None => Err(ModelError::syntax(line, col0, "line outside any section")),
            Section::Reactions(speed) => self.reaction_line(&mut cur, speed, line),
            Section::P => {
                let row = expr_row(&mut cur)?;
                self.p.push(row);
                Ok(())
            }
            Section::L => {
                let row = expr_row(&mut cur)?;
                self.l.get_or_insert_with(Vec::new).push(row);
                Ok(())
            }
            Section::Mu => {
                let e = Expr::parse(&mut cur)?;
                self.mu.push(e);
                Ok(())
            }
            Section::H1 => {
                let e = Expr::parse(&mut cur)?;
                self.h1.push(e);
                Ok(())
            }
            Section::Phi => {
                let e = Expr::parse(&mut cur)?;
                self.phi.get_or_insert_with(Vec::new).push(e);
                Ok(())
            }
        }
    }

    fn species_id(&mut self, name: &str, line: usize, col: usize) -> Result<usize, ModelError> {
        if let Some(s) = self.species.iter().find(|s| s.name == name) {
            return Ok(s.index);
        }
        if self.declared {
            return Err(ModelError::UnknownIdentifier { name: name.to_string(), line, col });
        }
        let index = self.species.len();
        self.species.push(Species { name: name.to_string(), index });
        Ok(index)
    }

    fn parse_complex(&mut self, cur: &mut Cursor) -> Result<Complex, ModelError> {
        let t = cur.peek().clone();
        if let Tok::Number(s) = &t.tok {
            if s == "0" && !matches!(cur.peek_at(1).tok, Tok::Ident(_)) {
                cur.next();
                return Ok(Complex::zero());
            }
        }
        let mut c = Complex::zero();
        loop {
            let t = cur.peek().clone();
            let coeff = if let Tok::Number(s) = &t.tok {
                cur.next();
                let k: u64 = s
                    .parse()
                    .map_err(|_| ModelError::syntax(t.line, t.col, "stoichiometric coefficient must be a nonnegative integer"))?;
                if k == 0 || k > MAX_STOICH {
                    return Err(ModelError::syntax(t.line, t.col, format!("stoichiometric coefficient must lie in 1..={MAX_STOICH}")));
                }
                k as u32
            } else {
                1
            };
            let t = cur.peek().clone();
            match &t.tok {
                Tok::Ident(name) => {
                    cur.next();
                    let i = self.species_id(name, t.line, t.col)?;
                    c.add(i, coeff);
                }
                _ => return Err(cur.unexpected("expected a species name")),
            }
            let plus = cur.peek().clone();
            if !cur.eat(&Tok::Plus) {
                return Ok(c);
            }
            if !matches!(cur.peek().tok, Tok::Ident(_) | Tok::Number(_)) {
                return Err(ModelError::syntax(plus.line, plus.col, "dangling '+' without a following species"));
            }
        }
    }

    fn reaction_line(&mut self, cur: &mut Cursor, speed: Speed, line: usize) -> Result<(), ModelError> {
        let reactant = self.parse_complex(cur)?;
        let arrow = cur.next();
        let reversible = match arrow.tok {
            Tok::Arrow => false,
            Tok::BiArrow => true,
            other => {
                return Err(ModelError::syntax(arrow.line, arrow.col, format!("expected '->' or '<->', found {}", other.describe())));
            }
        };
        let product = self.parse_complex(cur)?;
        cur.expect(&Tok::Colon)?;
        let kf = parse_rate(cur)?;
        let kr = if cur.eat(&Tok::Comma) {
            if !reversible {
                return Err(cur.unexpected("an irreversible reaction takes a single rate constant"));
            }
            Some(parse_rate(cur)?)
        } else {
            None
        };
        if !cur.at_end() {
            return Err(cur.unexpected("expected end of reaction"));
        }
        if reactant == product {
            return Err(ModelError::Invalid { line, message: "reactant and product complexes coincide".into() });
        }
        if reversible && kr.is_none() {
            return Err(cur.unexpected("a reversible reaction needs two rate constants"));
        }
        self.reactions.push(Reaction { reactant: reactant.clone(), product: product.clone(), rate: kf, speed, line });
        if let Some(kr) = kr {
            self.reactions.push(Reaction { reactant: product, product: reactant, rate: kr, speed, line });
        }
        Ok(())
    }

    fn finish(self) -> Result<Model, ModelError> {
        let user = UserReduction { params: self.params, phi: self.phi, l: self.l };
        let epsilon = self.epsilon.unwrap_or_else(|| Rational::new(1.into(), 100.into()));
        if self.generic || self.any_generic_section {
            if !self.reactions.is_empty() || self.declared {
                return Err(ModelError::Invalid {
                    line: self.reactions.first().map(|r| r.line).unwrap_or(0),
                    message: "reactions and generic sections cannot be mixed".into(),
                });
            }
            let vars = self
                .vars
                .ok_or_else(|| ModelError::Invalid { line: 0, message: "generic model without @vars".into() })?;
            let g = GenericModel { vars, p: self.p, mu: self.mu, h1: self.h1 };
            resolve(g.p.iter().flatten().chain(&g.mu).chain(&g.h1), &g.vars)?;
            let m = Model { kind: ModelKind::Generic(g), user, epsilon };
            resolve_user(&m)?;
            return Ok(m);
        }
        let crn = CrnModel { species: self.species, reactions: self.reactions, fast_nodes: self.fast_nodes, declared_species: self.declared };
        let m = Model { kind: ModelKind::Crn(crn), user, epsilon };
        resolve_user(&m)?;
        Ok(m)
    }
}

fn resolve<'a>(exprs: impl IntoIterator<Item = &'a Expr>, names: &[String]) -> Result<(), ModelError> {
    for e in exprs {
        let mut vs = Vec::new();
        e.variables(&mut vs);
        if let Some(bad) = vs.iter().find(|v| !names.contains(v)) {
            return Err(first_occurrence(e, bad).unwrap_or(ModelError::UnknownIdentifier { name: bad.clone(), line: 0, col: 0 }));
        }
    }
    Ok(())
}

fn first_occurrence(e: &Expr, name: &str) -> Option<ModelError> {
    match e {
        Expr::Num(_) => None,
        Expr::Var { name: n, line, col } => {
            (n == name).then(|| ModelError::UnknownIdentifier { name: n.clone(), line: *line, col: *col })
        }
        Expr::Neg(a) | Expr::Pow(a, _) => first_occurrence(a, name),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
            first_occurrence(a, name).or_else(|| first_occurrence(b, name))
        }
    }
}

/// `@L` lives in the state variables; `@phi` in the declared parameters or `v1, v2, ...`.
fn resolve_user(m: &Model) -> Result<(), ModelError> {
    if let Some(l) = &m.user.l {
        resolve(l.iter().flatten(), &m.state_names())?;
    }
    if let Some(phi) = &m.user.phi {
        if m.user.params.is_empty() {
            for e in phi {
                let mut vs = Vec::new();
                e.variables(&mut vs);
                for v in vs {
                    let ok = v.strip_prefix('v').is_some_and(|d| !d.is_empty() && d.chars().all(|c| c.is_ascii_digit()));
                    if !ok {
                        return Err(first_occurrence(e, &v).expect("variable occurs"));
                    }
                }
            }
        } else {
            resolve(phi, &m.user.params)?;
        }
    }
    Ok(())
}

fn expr_row(cur: &mut Cursor) -> Result<Vec<Expr>, ModelError> {
    let mut row = vec![Expr::parse_item(cur)?];
    while cur.eat(&Tok::Comma) {
        row.push(Expr::parse_item(cur)?);
    }
    if !cur.at_end() {
        return Err(cur.unexpected("expected ',' or end of line"));
    }
    Ok(row)
}

fn parse_rate(cur: &mut Cursor) -> Result<Rational, ModelError> {
    let start = cur.peek().clone();
    let neg = cur.eat(&Tok::Minus);
    let t = cur.next();
    let mut text = match &t.tok {
        Tok::Number(s) => s.clone(),
        other => return Err(ModelError::syntax(t.line, t.col, format!("expected a rate constant, found {}", other.describe()))),
    };
    if cur.eat(&Tok::Slash) {
        let d = cur.next();
        match &d.tok {
            Tok::Number(s) if s.chars().all(|c| c.is_ascii_digit()) && text.chars().all(|c| c.is_ascii_digit()) => {
                text = format!("{text}/{s}");
            }
            _ => return Err(ModelError::syntax(d.line, d.col, "expected an integer denominator")),
        }
    }
    let q = parse_rational(&text).map_err(|e| ModelError::syntax(t.line, t.col, e.to_string()))?;
    let q = if neg { -q } else { q };
    if q.is_negative() || q.is_zero() {
        return Err(ModelError::NonPositiveRate { value: tfr_exact::rational_to_string(&q), line: start.line, col: start.col });
    }
    Ok(q)
}
