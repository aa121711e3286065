//! Line-oriented text format for VPAs.
//!
//! ```text
//! calls:     a
//! returns:   c
//! internals: b
//! stack:     g
//! states:    q0
//! initial:   q0
//! final:     q0
//! call q0 a q0 g
//! ret  q0 c g q0
//! ret  q0 c BOT q0
//! int  q0 b q0
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;
use vpa_core::model::{
    Alphabet, CallRule, InternalRule, ModelError, ReturnRule, StackSym, StateId, Symbol, SymbolClass, Vpa,
    VpaParts, BOTTOM_NAME,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    At { line: usize, message: String },
    #[error("missing `{0}:` section")]
    MissingSection(&'static str),
}

impl ParseError {
    pub fn line(&self) -> Option<usize> {
        match self {
            ParseError::At { line, .. } => Some(*line),
            ParseError::MissingSection(_) => None,
        }
    }
}

fn at(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::At {
        line,
        message: message.into(),
    }
}

const SECTIONS: [&str; 7] = [
    "calls",
    "returns",
    "internals",
    "stack",
    "states",
    "initial",
    "final",
];

#[derive(Clone, Copy)]
enum Kind {
    Call,
    Ret,
    Int,
}

struct RuleLine<'t> {
    line: usize,
    kind: Kind,
    args: Vec<&'t str>,
}

pub fn parse_vpa(text: &str) -> Result<Vpa, ParseError> {
    // section name -> (line, tokens)
    let mut sections: HashMap<&str, (usize, Vec<&str>)> = HashMap::new();
    let mut rules = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = content.split_whitespace();
        let Some(head) = tokens.next() else { continue };
        if let Some((name, rest)) = head.split_once(':') {
            let Some(&name) = SECTIONS.iter().find(|&&s| s == name) else {
                return Err(at(line, format!("unknown section `{name}:`")));
            };
            if let Some((first, _)) = sections.get(name) {
                return Err(at(
                    line,
                    format!("duplicate section `{name}:` (first on line {first})"),
                ));
            }
            let values = std::iter::once(rest)
                .filter(|r| !r.is_empty())
                .chain(tokens)
                .collect();
            sections.insert(name, (line, values));
            continue;
        }
        let (kind, arity) = match head {
            "call" => (Kind::Call, 4),
            "ret" => (Kind::Ret, 4),
            "int" => (Kind::Int, 3),
            other => return Err(at(line, format!("expected a section or a rule, found `{other}`"))),
        };
        let args: Vec<&str> = tokens.collect();
        if args.len() != arity {
            return Err(at(
                line,
                format!("`{head}` takes {arity} arguments, found {}", args.len()),
            ));
        }
        rules.push(RuleLine { line, kind, args });
    }

    let mut take = |name: &'static str| sections.remove(name).unwrap_or((0, Vec::new()));
    let (calls_at, calls) = take("calls");
    let (returns_at, returns) = take("returns");
    let (internals_at, internals) = take("internals");
    let (stack_at, stack) = take("stack");
    let (states_at, states) = take("states");
    let (initial_at, initial) = take("initial");
    let (final_at, finals) = take("final");
    if initial_at == 0 {
        return Err(ParseError::MissingSection("initial"));
    }

    let alphabet = Alphabet::new(
        calls.iter().copied(),
        returns.iter().copied(),
        internals.iter().copied(),
    )
    .map_err(|e| {
        let line = match &e {
            ModelError::OverlappingClasses(s) | ModelError::InvalidName(s) => [
                (returns_at, &returns),
                (internals_at, &internals),
                (calls_at, &calls),
            ]
            .into_iter()
            .find(|(_, names)| names.contains(&s.as_str()))
            .map_or(calls_at, |(l, _)| l),
            _ => calls_at.max(returns_at).max(internals_at),
        };
        at(line.max(1), e.to_string())
    })?;

    let mut state_ids = HashMap::new();
    for (i, &name) in states.iter().enumerate() {
        if state_ids.insert(name, StateId(i as u32)).is_some() {
            return Err(at(states_at, format!("state `{name}` declared twice")));
        }
    }
    let mut stack_ids = HashMap::new();
    for (i, &name) in stack.iter().enumerate() {
        if name == BOTTOM_NAME {
            return Err(at(
                stack_at,
                format!("`{BOTTOM_NAME}` is implicit and cannot be declared"),
            ));
        }
        if stack_ids.insert(name, StackSym(i as u32 + 1)).is_some() {
            return Err(at(stack_at, format!("stack symbol `{name}` declared twice")));
        }
    }

    let state = |line: usize, name: &str| {
        state_ids
            .get(name)
            .copied()
            .ok_or_else(|| at(line, format!("undeclared state `{name}`")))
    };
    let symbol = |line: usize, name: &str, class: SymbolClass| {
        let sym = alphabet
            .lookup(name)
            .ok_or_else(|| at(line, format!("undeclared symbol `{name}`")))?;
        if alphabet.class(sym) != Some(class) {
            let section = match class {
                SymbolClass::Call => "calls",
                SymbolClass::Return => "returns",
                SymbolClass::Internal => "internals",
            };
            return Err(at(line, format!("`{name}` is not declared under `{section}:`")));
        }
        Ok::<Symbol, ParseError>(sym)
    };
    let stack_sym = |line: usize, name: &str| {
        if name == BOTTOM_NAME {
            return Ok(StackSym(0));
        }
        stack_ids
            .get(name)
            .copied()
            .ok_or_else(|| at(line, format!("undeclared stack symbol `{name}`")))
    };

    let mut parts = VpaParts {
        state_names: states.iter().map(|s| s.to_string()).collect(),
        stack_names: stack.iter().map(|s| s.to_string()).collect(),
        initial: initial
            .iter()
            .map(|q| state(initial_at, q))
            .collect::<Result<_, _>>()?,
        finals: finals
            .iter()
            .map(|q| state(final_at, q))
            .collect::<Result<_, _>>()?,
        ..VpaParts::default()
    };
    for RuleLine { line, kind, args } in rules {
        match kind {
            Kind::Call => {
                let push = stack_sym(line, args[3])?;
                if push.is_bottom() {
                    return Err(at(line, format!("call rule pushes `{BOTTOM_NAME}`")));
                }
                parts.call_rules.push(CallRule {
                    from: state(line, args[0])?,
                    symbol: symbol(line, args[1], SymbolClass::Call)?,
                    to: state(line, args[2])?,
                    push,
                });
            }
            Kind::Ret => parts.return_rules.push(ReturnRule {
                from: state(line, args[0])?,
                symbol: symbol(line, args[1], SymbolClass::Return)?,
                pop: stack_sym(line, args[2])?,
                to: state(line, args[3])?,
            }),
            Kind::Int => parts.internal_rules.push(InternalRule {
                from: state(line, args[0])?,
                symbol: symbol(line, args[1], SymbolClass::Internal)?,
                to: state(line, args[2])?,
            }),
        }
    }
    Vpa::from_parts(alphabet, parts).map_err(|e| {
        let line = match e {
            ModelError::InvalidName(ref s) if stack.contains(&s.as_str()) => stack_at,
            _ => states_at,
        };
        at(line.max(1), e.to_string())
    })
}

pub fn render_vpa(m: &Vpa) -> String {
    let mut out = String::new();
    let mut section = |label: &str, names: Vec<&str>| {
        let head = format!("{label}:");
        if names.is_empty() {
            out.push_str(&head);
        } else {
            let _ = write!(out, "{head:<11}{}", names.join(" "));
        }
        out.push('\n');
    };
    let a = m.alphabet();
    section("calls", a.names_of(SymbolClass::Call).collect());
    section("returns", a.names_of(SymbolClass::Return).collect());
    section("internals", a.names_of(SymbolClass::Internal).collect());
    section(
        "stack",
        m.stack_symbols().skip(1).map(|g| m.stack_name(g)).collect(),
    );
    section("states", m.states().map(|q| m.state_name(q)).collect());
    section("initial", m.initial().iter().map(|&q| m.state_name(q)).collect());
    section("final", m.finals().map(|q| m.state_name(q)).collect());

    let q = |s: StateId| m.state_name(s);
    let g = |s: StackSym| m.stack_name(s);
    for r in m.call_rules() {
        let _ = writeln!(
            out,
            "call {} {} {} {}",
            q(r.from),
            a.name(r.symbol),
            q(r.to),
            g(r.push)
        );
    }
    for r in m.return_rules() {
        let _ = writeln!(
            out,
            "ret  {} {} {} {}",
            q(r.from),
            a.name(r.symbol),
            g(r.pop),
            q(r.to)
        );
    }
    for r in m.internal_rules() {
        let _ = writeln!(out, "int  {} {} {}", q(r.from), a.name(r.symbol), q(r.to));
    }
    out
}
