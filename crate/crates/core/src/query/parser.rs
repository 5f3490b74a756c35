//! Hand-written lexer and recursive-descent parser.

use std::collections::HashMap;

use super::ast::*;
use super::QueryError;
use crate::store::PropertyValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecMode {
    #[default]
    Normal,
    Profile,
    Explain,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Parsed {
    pub mode: ExecMode,
    pub statement: Statement,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Str(String),
    Int(i64),
    Float(f64),
    Param(String),
    Sym(&'static str),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

const SYMBOLS: [&str; 19] = [
    "<>", "<=", ">=", "(", ")", "[", "]", "{", "}", ":", ",", ".", "-", ">", "<", "=", "*", ";",
    "+",
];

fn lex(text: &str) -> Result<Vec<Token>, QueryError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, column, m: &str| QueryError::Syntax {
        line,
        column,
        message: m.to_owned(),
    };
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (start_line, start_col) = (line, col);
        let start = i;
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if c == '`' {
            i += 1;
            while i < chars.len() && chars[i] != '`' {
                i += 1;
            }
            if i >= chars.len() {
                return Err(err(start_line, start_col, "unterminated quoted identifier"));
            }
            i += 1;
            Tok::Ident(chars[start + 1..i - 1].iter().collect())
        } else if c == '$' {
            i += 1;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            if i == start + 1 {
                return Err(err(
                    start_line,
                    start_col,
                    "expected parameter name after '$'",
                ));
            }
            Tok::Param(chars[start + 1..i].iter().collect())
        } else if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let mut float = false;
            if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                float = true;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    float = true;
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let s: String = chars[start..i].iter().collect();
            if float {
                Tok::Float(
                    s.parse()
                        .map_err(|_| err(start_line, start_col, "bad number"))?,
                )
            } else {
                Tok::Int(
                    s.parse()
                        .map_err(|_| err(start_line, start_col, "integer out of range"))?,
                )
            }
        } else if c == '\'' || c == '"' {
            let quote = c;
            i += 1;
            let mut s = String::new();
            loop {
                let Some(&ch) = chars.get(i) else {
                    return Err(err(start_line, start_col, "unterminated string"));
                };
                i += 1;
                if ch == quote {
                    break;
                }
                if ch == '\\' {
                    let Some(&e) = chars.get(i) else {
                        return Err(err(start_line, start_col, "unterminated string"));
                    };
                    i += 1;
                    s.push(match e {
                        'n' => '\n',
                        't' => '\t',
                        other => other,
                    });
                } else {
                    if ch == '\n' {
                        line += 1;
                        col = 0;
                    }
                    s.push(ch);
                }
            }
            Tok::Str(s)
        } else {
            let rest: String = chars[i..(i + 2).min(chars.len())].iter().collect();
            let Some(sym) = SYMBOLS.iter().find(|s| rest.starts_with(**s)) else {
                return Err(err(
                    start_line,
                    start_col,
                    &format!("unexpected character {c:?}"),
                ));
            };
            i += sym.chars().count();
            Tok::Sym(sym)
        };
        col += i - start;
        out.push(Token {
            tok,
            line: start_line,
            col: start_col,
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VarKind {
    Node,
    Edge,
    Scalar,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    anon: usize,
}

const RESERVED: [&str; 16] = [
    "MATCH", "WHERE", "RETURN", "ORDER", "BY", "LIMIT", "AND", "CREATE", "CALL", "YIELD", "AS",
    "ASC", "DESC", "INDEX", "ON", "PROFILE",
];

pub fn parse(text: &str) -> Result<Parsed, QueryError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        anon: 0,
    };
    let parsed = p.statement()?;
    p.eat_sym(";");
    if !matches!(p.peek(), Tok::Eof) {
        return Err(p.error("expected end of query"));
    }
    Ok(parsed)
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, ahead: usize) -> &Tok {
        &self.toks[(self.pos + ahead).min(self.toks.len() - 1)].tok
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: &str) -> QueryError {
        let t = &self.toks[self.pos];
        let found = match &t.tok {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Str(s) => format!("string {s:?}"),
            Tok::Int(i) => i.to_string(),
            Tok::Float(f) => f.to_string(),
            Tok::Param(p) => format!("${p}"),
            Tok::Sym(s) => format!("'{s}'"),
            Tok::Eof => "end of input".to_owned(),
        };
        QueryError::Syntax {
            line: t.line,
            column: t.col,
            message: format!("{message}, found {found}"),
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s.eq_ignore_ascii_case(kw))
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.is_kw(kw) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect_kw(&mut self, kw: &str) -> Result<(), QueryError> {
        if self.eat_kw(kw) {
            Ok(())
        } else {
            Err(self.error(&format!("expected {kw}")))
        }
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), QueryError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{s}'")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, QueryError> {
        match self.peek() {
            Tok::Ident(s) => {
                let s = s.clone();
                self.advance();
                Ok(s)
            }
            _ => Err(self.error(&format!("expected {what}"))),
        }
    }

    /// Identifier that is not a clause keyword.
    fn variable(&mut self) -> Result<String, QueryError> {
        if let Tok::Ident(s) = self.peek() {
            if RESERVED.iter().any(|k| s.eq_ignore_ascii_case(k)) {
                return Err(self.error("expected variable"));
            }
        }
        self.ident("variable")
    }

    fn statement(&mut self) -> Result<Parsed, QueryError> {
        let mode = if self.eat_kw("PROFILE") {
            ExecMode::Profile
        } else if self.eat_kw("EXPLAIN") {
            ExecMode::Explain
        } else {
            ExecMode::Normal
        };
        let statement = if self.eat_kw("CREATE") {
            if self.eat_kw("INDEX") {
                let (label, keys) = self.index_spec()?;
                Statement::CreateIndex {
                    label,
                    keys,
                    unique: false,
                }
            } else if self.eat_kw("CONSTRAINT") {
                let (label, keys) = self.index_spec()?;
                self.expect_kw("UNIQUE")?;
                Statement::CreateIndex {
                    label,
                    keys,
                    unique: true,
                }
            } else {
                let mut patterns = vec![self.pattern()?];
                while self.eat_sym(",") {
                    patterns.push(self.pattern()?);
                }
                check_create(&patterns)?;
                Statement::Create(patterns)
            }
        } else if self.eat_kw("DROP") {
            if !self.eat_kw("INDEX") && !self.eat_kw("CONSTRAINT") {
                return Err(self.error("expected INDEX"));
            }
            if self.is_kw("ON") {
                let (label, keys) = self.index_spec()?;
                Statement::DropIndex(IndexTarget::On { label, keys })
            } else {
                Statement::DropIndex(IndexTarget::Name(self.ident("index name")?))
            }
        } else if self.eat_kw("SHOW") {
            if self.eat_kw("INDEXES") || self.eat_kw("INDEX") {
                Statement::ShowIndexes
            } else if self.eat_kw("CONSTRAINTS") || self.eat_kw("CONSTRAINT") {
                Statement::ShowConstraints
            } else {
                return Err(self.error("expected INDEXES or CONSTRAINTS"));
            }
        } else if self.is_kw("CALL") {
            self.call()?
        } else if self.is_kw("MATCH") {
            Statement::Query(self.query(None)?)
        } else {
            return Err(self.error("expected MATCH, CREATE, CALL, DROP or SHOW"));
        };
        Ok(Parsed { mode, statement })
    }

    fn index_spec(&mut self) -> Result<(String, Vec<String>), QueryError> {
        self.expect_kw("ON")?;
        self.expect_sym(":")?;
        let label = self.ident("label")?;
        self.expect_sym("(")?;
        let mut keys = vec![self.ident("property key")?];
        while self.eat_sym(",") {
            keys.push(self.ident("property key")?);
        }
        self.expect_sym(")")?;
        Ok((label, keys))
    }

    fn call(&mut self) -> Result<Statement, QueryError> {
        self.expect_kw("CALL")?;
        let mut name = self.ident("procedure name")?;
        while self.eat_sym(".") {
            name.push('.');
            name.push_str(&self.ident("procedure name")?);
        }
        self.expect_sym("(")?;
        let mut args = Vec::new();
        if !self.is_sym(")") {
            args.push(self.literal()?);
            while self.eat_sym(",") {
                args.push(self.literal()?);
            }
        }
        self.expect_sym(")")?;
        let mut yields = Vec::new();
        if self.eat_kw("YIELD") {
            loop {
                let field = self.ident("yield field")?;
                let alias = if self.eat_kw("AS") {
                    Some(self.variable()?)
                } else {
                    None
                };
                yields.push((field, alias));
                if !self.eat_sym(",") {
                    break;
                }
            }
        }
        match name.to_ascii_lowercase().as_str() {
            "algo.or.solve" => {
                let [config] = <[Literal; 1]>::try_from(args).map_err(|_| {
                    QueryError::Semantic("algo.or.solve takes one map argument".into())
                })?;
                if yields.iter().any(|(_, a)| a.is_some()) {
                    return Err(QueryError::Semantic(
                        "algo.or.solve yields cannot be aliased".into(),
                    ));
                }
                Ok(Statement::Solve {
                    config,
                    yields: yields.into_iter().map(|(f, _)| f).collect(),
                })
            }
            "vector.knn" => {
                let knn = knn_source(args, &yields)?;
                Ok(Statement::Query(self.query(Some(knn))?))
            }
            _ => Err(QueryError::UnknownProcedure(name)),
        }
    }

    fn literal(&mut self) -> Result<Literal, QueryError> {
        if self.eat_sym("[") {
            let mut items = Vec::new();
            if !self.is_sym("]") {
                items.push(self.literal()?);
                while self.eat_sym(",") {
                    items.push(self.literal()?);
                }
            }
            self.expect_sym("]")?;
            return Ok(Literal::List(items));
        }
        if self.eat_sym("{") {
            let mut entries = Vec::new();
            if !self.is_sym("}") {
                loop {
                    let key = match self.peek().clone() {
                        Tok::Str(s) => {
                            self.advance();
                            s
                        }
                        _ => self.ident("map key")?,
                    };
                    self.expect_sym(":")?;
                    entries.push((key, self.literal()?));
                    if !self.eat_sym(",") {
                        break;
                    }
                }
            }
            self.expect_sym("}")?;
            return Ok(Literal::Map(entries));
        }
        if let Tok::Param(p) = self.peek().clone() {
            self.advance();
            return Ok(Literal::Param(p));
        }
        Ok(Literal::Scalar(self.scalar()?))
    }

    fn scalar(&mut self) -> Result<PropertyValue, QueryError> {
        let negative = self.eat_sym("-");
        if !negative {
            self.eat_sym("+");
        }
        let v = match self.peek().clone() {
            Tok::Int(i) => PropertyValue::Int(if negative { -i } else { i }),
            Tok::Float(f) => PropertyValue::Float(if negative { -f } else { f }),
            Tok::Str(s) if !negative => PropertyValue::String(s),
            Tok::Ident(s) if !negative && s.eq_ignore_ascii_case("true") => {
                PropertyValue::Bool(true)
            }
            Tok::Ident(s) if !negative && s.eq_ignore_ascii_case("false") => {
                PropertyValue::Bool(false)
            }
            Tok::Ident(s) if !negative && s.eq_ignore_ascii_case("null") => PropertyValue::Null,
            _ => return Err(self.error("expected literal")),
        };
        self.advance();
        Ok(v)
    }

    /// Scalar, numeric list (as a vector) or parameter.
    fn operand(&mut self) -> Result<Operand, QueryError> {
        if let Tok::Param(p) = self.peek().clone() {
            self.advance();
            return Ok(Operand::Param(p));
        }
        if self.is_sym("[") {
            let lit = self.literal()?;
            return literal_vector(&lit).map(Operand::Literal).ok_or_else(|| {
                QueryError::TypeMismatch("list literals must contain only numbers".into())
            });
        }
        Ok(Operand::Literal(self.scalar()?))
    }

    fn prop_map(&mut self) -> Result<Vec<(String, Operand)>, QueryError> {
        let mut props = Vec::new();
        if self.eat_sym("{") {
            if !self.is_sym("}") {
                loop {
                    let key = self.ident("property key")?;
                    self.expect_sym(":")?;
                    props.push((key, self.operand()?));
                    if !self.eat_sym(",") {
                        break;
                    }
                }
            }
            self.expect_sym("}")?;
        }
        Ok(props)
    }

    fn node(&mut self) -> Result<NodePattern, QueryError> {
        self.expect_sym("(")?;
        let var = if matches!(self.peek(), Tok::Ident(_)) {
            self.variable()?
        } else {
            self.anon += 1;
            format!("#n{}", self.anon)
        };
        let label = if self.eat_sym(":") {
            Some(self.ident("label")?)
        } else {
            None
        };
        let props = self.prop_map()?;
        self.expect_sym(")")?;
        Ok(NodePattern { var, label, props })
    }

    fn edge_body(
        &mut self,
    ) -> Result<(Option<String>, Option<String>, Vec<(String, Operand)>), QueryError> {
        if !self.eat_sym("[") {
            return Ok((None, None, Vec::new()));
        }
        let var = if matches!(self.peek(), Tok::Ident(_)) {
            Some(self.variable()?)
        } else {
            None
        };
        let rel = if self.eat_sym(":") {
            Some(self.ident("relationship type")?)
        } else {
            None
        };
        let props = self.prop_map()?;
        self.expect_sym("]")?;
        Ok((var, rel, props))
    }

    fn edge(&mut self) -> Result<Option<EdgePattern>, QueryError> {
        let dir = if self.is_sym("<") && matches!(self.peek_at(1), Tok::Sym("-")) {
            self.advance();
            self.advance();
            let (var, rel_type, props) = self.edge_body()?;
            self.expect_sym("-")?;
            return Ok(Some(EdgePattern {
                var,
                rel_type,
                dir: EdgeDir::In,
                props,
            }));
        } else if self.eat_sym("-") {
            EdgeDir::Both
        } else {
            return Ok(None);
        };
        let (var, rel_type, props) = self.edge_body()?;
        self.expect_sym("-")?;
        let dir = if self.eat_sym(">") { EdgeDir::Out } else { dir };
        Ok(Some(EdgePattern {
            var,
            rel_type,
            dir,
            props,
        }))
    }

    fn pattern(&mut self) -> Result<Pattern, QueryError> {
        let mut nodes = vec![self.node()?];
        let mut edges = Vec::new();
        while let Some(e) = self.edge()? {
            edges.push(e);
            nodes.push(self.node()?);
        }
        Ok(Pattern { nodes, edges })
    }

    fn expr(&mut self) -> Result<Expr, QueryError> {
        let var = self.variable()?;
        if self.eat_sym(".") {
            Ok(Expr::Prop(var, self.ident("property key")?))
        } else {
            Ok(Expr::Var(var))
        }
    }

    fn return_item(&mut self) -> Result<ReturnItem, QueryError> {
        let agg = match self.peek() {
            Tok::Ident(s) if matches!(self.peek_at(1), Tok::Sym("(")) => {
                match s.to_ascii_lowercase().as_str() {
                    "count" => Some(AggFn::Count),
                    "sum" => Some(AggFn::Sum),
                    "avg" => Some(AggFn::Avg),
                    "min" => Some(AggFn::Min),
                    "max" => Some(AggFn::Max),
                    _ => return Err(self.error("unknown function")),
                }
            }
            _ => None,
        };
        let expr = match agg {
            Some(f) => {
                self.advance();
                self.expect_sym("(")?;
                let arg = if self.eat_sym("*") {
                    if f != AggFn::Count {
                        return Err(QueryError::Semantic(format!(
                            "{}(*) is not allowed",
                            f.name()
                        )));
                    }
                    None
                } else {
                    Some(self.expr()?)
                };
                self.expect_sym(")")?;
                ReturnExpr::Agg(f, arg)
            }
            None => ReturnExpr::Expr(self.expr()?),
        };
        let alias = if self.eat_kw("AS") {
            Some(self.ident("alias")?)
        } else {
            None
        };
        Ok(ReturnItem { expr, alias })
    }

    fn query(&mut self, knn: Option<KnnSource>) -> Result<Query, QueryError> {
        let mut q = Query {
            knn,
            ..Default::default()
        };
        while self.eat_kw("MATCH") {
            q.patterns.push(self.pattern()?);
            while self.eat_sym(",") {
                q.patterns.push(self.pattern()?);
            }
        }
        if q.patterns.is_empty() && q.knn.is_none() {
            return Err(self.error("expected MATCH"));
        }
        if self.eat_kw("WHERE") {
            loop {
                let var = self.variable()?;
                self.expect_sym(".")?;
                let key = self.ident("property key")?;
                let op = match self.advance() {
                    Tok::Sym("=") => CmpOp::Eq,
                    Tok::Sym("<>") => CmpOp::Ne,
                    Tok::Sym("<") => CmpOp::Lt,
                    Tok::Sym("<=") => CmpOp::Le,
                    Tok::Sym(">") => CmpOp::Gt,
                    Tok::Sym(">=") => CmpOp::Ge,
                    _ => {
                        self.pos -= 1;
                        return Err(self.error("expected comparison operator"));
                    }
                };
                let rhs = self.operand()?;
                q.conditions.push(Condition { var, key, op, rhs });
                if !self.eat_kw("AND") {
                    break;
                }
            }
        }
        self.expect_kw("RETURN")?;
        q.returns.push(self.return_item()?);
        while self.eat_sym(",") {
            q.returns.push(self.return_item()?);
        }
        if self.eat_kw("ORDER") {
            self.expect_kw("BY")?;
            loop {
                let expr = self.expr()?;
                let descending = if self.eat_kw("DESC") || self.eat_kw("DESCENDING") {
                    true
                } else {
                    let _ = self.eat_kw("ASC") || self.eat_kw("ASCENDING");
                    false
                };
                q.order_by.push(OrderItem { expr, descending });
                if !self.eat_sym(",") {
                    break;
                }
            }
        }
        if self.eat_kw("LIMIT") {
            match self.advance() {
                Tok::Int(n) if n >= 0 => q.limit = Some(n as u64),
                _ => {
                    self.pos -= 1;
                    return Err(self.error("expected non-negative integer"));
                }
            }
        }
        normalize(&mut q)?;
        Ok(q)
    }
}

fn literal_vector(lit: &Literal) -> Option<PropertyValue> {
    let Literal::List(items) = lit else {
        return None;
    };
    items
        .iter()
        .map(|i| match i {
            Literal::Scalar(p) => p.as_f64().map(|x| x as f32),
            _ => None,
        })
        .collect::<Option<Vec<f32>>>()
        .map(PropertyValue::Vector)
}

fn knn_source(
    args: Vec<Literal>,
    yields: &[(String, Option<String>)],
) -> Result<KnnSource, QueryError> {
    let bad = || QueryError::Semantic("vector.knn(label, key, vector, k[, metric])".into());
    if !(4..=5).contains(&args.len()) {
        return Err(bad());
    }
    let text = |l: &Literal| match l {
        Literal::Scalar(PropertyValue::String(s)) => Ok(s.clone()),
        _ => Err(bad()),
    };
    let label = text(&args[0])?;
    let key = text(&args[1])?;
    let query = match &args[2] {
        Literal::Param(p) => Operand::Param(p.clone()),
        l => Operand::Literal(literal_vector(l).ok_or_else(bad)?),
    };
    let k = match &args[3] {
        Literal::Param(p) => Operand::Param(p.clone()),
        Literal::Scalar(v @ PropertyValue::Int(_)) => Operand::Literal(v.clone()),
        _ => return Err(bad()),
    };
    let metric = match args.get(4) {
        Some(l) => text(l)?,
        None => "cosine".to_owned(),
    };
    let mut node_var = None;
    let mut score_var = None;
    for (field, alias) in yields {
        let name = alias.clone().unwrap_or_else(|| field.clone());
        match field.to_ascii_lowercase().as_str() {
            "node" => node_var = Some(name),
            "score" => score_var = Some(name),
            _ => {
                return Err(QueryError::Semantic(format!(
                    "vector.knn has no output {field}"
                )))
            }
        }
    }
    let node_var =
        node_var.ok_or_else(|| QueryError::Semantic("vector.knn must YIELD node".into()))?;
    Ok(KnnSource {
        label,
        key,
        query,
        k,
        metric,
        node_var,
        score_var,
    })
}

fn bind(kinds: &mut HashMap<String, VarKind>, var: &str, kind: VarKind) -> Result<(), QueryError> {
    match kinds.insert(var.to_owned(), kind) {
        Some(prev) if prev != kind || kind == VarKind::Edge => Err(QueryError::Semantic(format!(
            "variable {var} is bound more than once with incompatible roles"
        ))),
        _ => Ok(()),
    }
}

/// Moves inline property maps into WHERE and checks variable scoping.
fn normalize(q: &mut Query) -> Result<(), QueryError> {
    let mut kinds: HashMap<String, VarKind> = HashMap::new();
    if let Some(k) = &q.knn {
        bind(&mut kinds, &k.node_var, VarKind::Node)?;
        if let Some(s) = &k.score_var {
            bind(&mut kinds, s, VarKind::Scalar)?;
        }
    }
    let mut inline = Vec::new();
    let mut anon_edges = 0;
    for p in &mut q.patterns {
        for n in &mut p.nodes {
            bind(&mut kinds, &n.var, VarKind::Node)?;
            for (key, rhs) in n.props.drain(..) {
                inline.push(Condition {
                    var: n.var.clone(),
                    key,
                    op: CmpOp::Eq,
                    rhs,
                });
            }
        }
        for e in &mut p.edges {
            if e.var.is_none() && !e.props.is_empty() {
                anon_edges += 1;
                e.var = Some(format!("#e{anon_edges}"));
            }
            if let Some(v) = &e.var {
                bind(&mut kinds, v, VarKind::Edge)?;
                for (key, rhs) in e.props.drain(..) {
                    inline.push(Condition {
                        var: v.clone(),
                        key,
                        op: CmpOp::Eq,
                        rhs,
                    });
                }
            }
        }
    }
    inline.append(&mut q.conditions);
    q.conditions = inline;
    for c in &q.conditions {
        match kinds.get(&c.var) {
            None => return Err(QueryError::UnboundVariable(c.var.clone())),
            Some(VarKind::Scalar) => {
                return Err(QueryError::TypeMismatch(format!(
                    "{} has no properties",
                    c.var
                )));
            }
            _ => {}
        }
    }
    let check_expr = |e: &Expr| match (kinds.get(e.var()), e) {
        (None, _) => Err(QueryError::UnboundVariable(e.var().to_owned())),
        (Some(VarKind::Scalar), Expr::Prop(v, _)) => {
            Err(QueryError::TypeMismatch(format!("{v} has no properties")))
        }
        _ => Ok(()),
    };
    for r in &q.returns {
        match &r.expr {
            ReturnExpr::Expr(e) | ReturnExpr::Agg(_, Some(e)) => check_expr(e)?,
            ReturnExpr::Agg(_, None) => {}
        }
    }
    let mut names = std::collections::HashSet::new();
    for r in &q.returns {
        if !names.insert(r.name()) {
            return Err(QueryError::Semantic(format!(
                "duplicate column {}",
                r.name()
            )));
        }
    }
    for o in &q.order_by {
        let is_alias = matches!(&o.expr, Expr::Var(v) if q.returns.iter().any(|r| r.alias.as_deref() == Some(v)));
        if !is_alias {
            check_expr(&o.expr)?;
        }
    }
    Ok(())
}

fn check_create(patterns: &[Pattern]) -> Result<(), QueryError> {
    let mut labeled = std::collections::HashSet::new();
    for p in patterns {
        for n in &p.nodes {
            if n.label.is_some() {
                labeled.insert(n.var.clone());
            }
        }
        for e in &p.edges {
            if e.rel_type.is_none() {
                return Err(QueryError::Semantic(
                    "CREATE needs a relationship type".into(),
                ));
            }
            if e.dir == EdgeDir::Both {
                return Err(QueryError::Semantic(
                    "CREATE needs a directed relationship".into(),
                ));
            }
        }
    }
    for p in patterns {
        for n in &p.nodes {
            if !labeled.contains(&n.var) {
                return Err(QueryError::Semantic(format!(
                    "created node {} needs a label",
                    n.var
                )));
            }
        }
    }
    Ok(())
}
