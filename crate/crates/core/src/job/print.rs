use std::fmt;

use super::{Command, Item, JobFile, LiftChoice, ModuleSpec, OpRef};

fn twists(ts: &[i64]) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < ts.len() {
        let run = ts[i..].iter().take_while(|&&t| t == ts[i]).count();
        parts.push(if run > 1 { format!("{}^{run}", ts[i]) } else { ts[i].to_string() });
        i += run;
    }
    format!("[{}]", parts.join(", "))
}

fn matrix(m: &[Vec<String>]) -> String {
    let rows: Vec<String> = m.iter().map(|r| format!("[{}]", r.join(", "))).collect();
    format!("[{}]", rows.join(", "))
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Command::CheckEzd { ring, x, y } => write!(f, "check ezd {ring} {x} {y}"),
            Command::Ann { elem, ring } => write!(f, "ann {elem} in {ring}"),
            Command::Resolve { ring, module, hmax, dmax, name } => {
                let m = match module {
                    ModuleSpec::Elem(e) => e.clone(),
                    ModuleSpec::Matrix(m) => matrix(m),
                };
                write!(f, "resolve {ring} / {m} --hmax {hmax} --dmax {dmax}")?;
                if let Some(n) = name {
                    write!(f, " as {n}")?;
                }
                Ok(())
            }
            Command::OperatorsBuild { complex, x, y, zs, lift, name } => {
                write!(f, "operators build {complex} pair {x},{y}")?;
                if !zs.is_empty() {
                    write!(f, " z {}", zs.join(", "))?;
                }
                match lift {
                    LiftChoice::Canonical => {}
                    LiftChoice::Random(None) => write!(f, " --random")?,
                    LiftChoice::Random(Some(s)) => write!(f, " --seed {s}")?,
                }
                if let Some(n) = name {
                    write!(f, " as {n}")?;
                }
                Ok(())
            }
            Command::HomotopyCheck { map, window, flipped } => {
                write!(f, "homotopy check ")?;
                if let Some(b) = &map.bundle {
                    write!(f, "{b}.")?;
                }
                match &map.op {
                    OpRef::Phi => write!(f, "phi")?,
                    OpRef::Psi(z) => write!(f, "psi({z})")?,
                }
                write!(f, " --window {}:{}", window.0, window.1)?;
                if *flipped {
                    write!(f, " --convention flipped")?;
                }
                Ok(())
            }
            Command::ReproduceExample { dmax } => {
                write!(f, "reproduce-example")?;
                if let Some(d) = dmax {
                    write!(f, " --dmax {d}")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Ring { name, vars, relations, graded } => {
                let vs: Vec<String> = vars.iter().map(|(v, d)| format!("{v}:{d}")).collect();
                write!(f, "ring {name} vars {}", vs.join(", "))?;
                if !graded {
                    write!(f, " ungraded")?;
                }
                if !relations.is_empty() {
                    write!(f, " mod {}", relations.join("; "))?;
                }
                Ok(())
            }
            Item::Elem { name, ring, poly } => write!(f, "elem {name} in {ring} = {poly}"),
            Item::Quotient { name, ring, elem } => write!(f, "quotient {name} = {ring} / {elem}"),
            Item::Complex { name, ring, modules, maps } => {
                writeln!(f, "complex {name} over {ring} {{")?;
                for (i, t) in modules {
                    writeln!(f, "  module {i} twists {}", twists(t))?;
                }
                for (i, m) in maps {
                    writeln!(f, "  map d{i} = {}", matrix(m))?;
                }
                write!(f, "}}")
            }
            Item::Command(c) => c.fmt(f),
        }
    }
}

impl fmt::Display for JobFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for item in &self.items {
            writeln!(f, "{item}")?;
        }
        Ok(())
    }
}
