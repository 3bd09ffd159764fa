//! Line-oriented text formats.
//!
//! DFA:
//! ```text
//! alphabet 2
//! states 2
//! initial 0
//! accepting 1
//! trans 0 0 0
//! trans 0 1 1
//! ...
//! ```
//! An optional `sink q` line sends every unlisted transition to `q`;
//! without it all transitions must be listed. Transducers use `input m`,
//! `output k`, `states n`, `initial q`, `final q out...` and
//! `trans q d q' out...`. Blank lines and `#` comments are ignored.

use std::fmt::Write as _;

use crate::dfa::Dfa;
use crate::error::AutomataError;
use crate::transducer::Transducer;
use crate::Digit;

struct Line<'a> {
    number: usize,
    key: &'a str,
    args: Vec<&'a str>,
}

fn lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("").trim();
        let mut parts = body.split_whitespace();
        let key = parts.next()?;
        Some(Line {
            number: i + 1,
            key,
            args: parts.collect(),
        })
    })
}

fn err(line: usize, msg: impl Into<String>) -> AutomataError {
    AutomataError::Parse {
        line,
        msg: msg.into(),
    }
}

fn num(line: &Line, i: usize) -> Result<usize, AutomataError> {
    let s = line
        .args
        .get(i)
        .ok_or_else(|| err(line.number, format!("`{}` needs more arguments", line.key)))?;
    s.parse()
        .map_err(|_| err(line.number, format!("not a number: {s}")))
}

fn single(line: &Line, slot: &mut Option<usize>) -> Result<(), AutomataError> {
    if line.args.len() != 1 {
        return Err(err(line.number, format!("`{}` takes one argument", line.key)));
    }
    if slot.is_some() {
        return Err(err(line.number, format!("duplicate `{}`", line.key)));
    }
    *slot = Some(num(line, 0)?);
    Ok(())
}

fn required(slot: Option<usize>, key: &str) -> Result<usize, AutomataError> {
    slot.ok_or_else(|| err(0, format!("missing `{key}` line")))
}

impl Dfa {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "alphabet {}", self.alphabet());
        let _ = writeln!(s, "states {}", self.state_count());
        let _ = writeln!(s, "initial {}", self.initial());
        s.push_str("accepting");
        for q in self.accepting_states() {
            let _ = write!(s, " {q}");
        }
        s.push('\n');
        for q in 0..self.state_count() {
            for d in 0..self.alphabet() as Digit {
                let _ = writeln!(s, "trans {q} {d} {}", self.next(q, d));
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Dfa, AutomataError> {
        let (mut alphabet, mut states, mut initial, mut sink) = (None, None, None, None);
        let mut accepting_list = Vec::new();
        let mut transitions = Vec::new();
        for line in lines(text) {
            match line.key {
                "alphabet" => single(&line, &mut alphabet)?,
                "states" => single(&line, &mut states)?,
                "initial" => single(&line, &mut initial)?,
                "sink" => single(&line, &mut sink)?,
                "accepting" => {
                    for i in 0..line.args.len() {
                        accepting_list.push((line.number, num(&line, i)?));
                    }
                }
                "trans" => {
                    if line.args.len() != 3 {
                        return Err(err(line.number, "`trans` takes three arguments"));
                    }
                    transitions.push((line.number, num(&line, 0)?, num(&line, 1)?, num(&line, 2)?));
                }
                other => return Err(err(line.number, format!("unknown key `{other}`"))),
            }
        }
        let m = required(alphabet, "alphabet")?;
        let n = required(states, "states")?;
        let q0 = required(initial, "initial")?;
        if m == 0 || n == 0 {
            return Err(err(0, "alphabet and state count must be positive"));
        }
        let check = |line: usize, q: usize| {
            if q < n {
                Ok(q)
            } else {
                Err(err(line, format!("state {q} out of range")))
            }
        };
        check(0, q0)?;
        if let Some(s) = sink {
            check(0, s)?;
        }
        let mut accepting = vec![false; n];
        for (line, q) in accepting_list {
            accepting[check(line, q)?] = true;
        }
        let mut table: Vec<Option<usize>> = vec![None; n * m];
        for (line, q, d, t) in transitions {
            check(line, q)?;
            check(line, t)?;
            if d >= m {
                return Err(err(line, format!("digit {d} outside alphabet")));
            }
            if table[q * m + d].replace(t).is_some() {
                return Err(err(line, format!("duplicate transition from {q} on {d}")));
            }
        }
        let mut trans = Vec::with_capacity(n * m);
        for (i, slot) in table.into_iter().enumerate() {
            match (slot, sink) {
                (Some(t), _) => trans.push(t),
                (None, Some(s)) => trans.push(s),
                (None, None) => {
                    return Err(err(
                        0,
                        format!("missing transition from {} on {} and no sink", i / m, i % m),
                    ))
                }
            }
        }
        Dfa::from_parts(m, q0, accepting, trans)
    }
}

fn digits(line: &Line, from: usize) -> Result<Vec<Digit>, AutomataError> {
    (from..line.args.len())
        .map(|i| num(line, i).map(|d| d as Digit))
        .collect()
}

impl Transducer {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "input {}", self.input_alphabet());
        let _ = writeln!(s, "output {}", self.output_alphabet());
        let _ = writeln!(s, "states {}", self.state_count());
        let _ = writeln!(s, "initial {}", self.initial());
        for q in 0..self.state_count() {
            if let Some(out) = self.final_output(q) {
                let _ = write!(s, "final {q}");
                for o in out {
                    let _ = write!(s, " {o}");
                }
                s.push('\n');
            }
        }
        for q in 0..self.state_count() {
            for d in 0..self.input_alphabet() as Digit {
                if let Some((t, out)) = self.transition(q, d) {
                    let _ = write!(s, "trans {q} {d} {t}");
                    for o in out {
                        let _ = write!(s, " {o}");
                    }
                    s.push('\n');
                }
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Transducer, AutomataError> {
        let (mut input, mut output, mut states, mut initial) = (None, None, None, None);
        let mut finals = Vec::new();
        let mut transitions = Vec::new();
        for line in lines(text) {
            match line.key {
                "input" => single(&line, &mut input)?,
                "output" => single(&line, &mut output)?,
                "states" => single(&line, &mut states)?,
                "initial" => single(&line, &mut initial)?,
                "final" => finals.push((line.number, num(&line, 0)?, digits(&line, 1)?)),
                "trans" => transitions.push((
                    line.number,
                    num(&line, 0)?,
                    num(&line, 1)?,
                    num(&line, 2)?,
                    digits(&line, 3)?,
                )),
                other => return Err(err(line.number, format!("unknown key `{other}`"))),
            }
        }
        let m = required(input, "input")?;
        let k = required(output, "output")?;
        let n = required(states, "states")?;
        let q0 = required(initial, "initial")?;
        if n == 0 || q0 >= n {
            return Err(err(0, "initial state out of range"));
        }
        let mut t = Transducer::new(m, k, n, q0);
        let bad_out = |w: &[Digit]| w.iter().any(|&o| o as usize >= k);
        for (line, q, out) in finals {
            if q >= n || bad_out(&out) {
                return Err(err(line, "final line out of range"));
            }
            t.set_final(q, out);
        }
        for (line, q, d, to, out) in transitions {
            if q >= n || to >= n || d >= m || bad_out(&out) {
                return Err(err(line, "transition out of range"));
            }
            if t.transition(q, d as Digit).is_some() {
                return Err(err(line, format!("duplicate transition from {q} on {d}")));
            }
            t.set_transition(q, d as Digit, to, out);
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dfa_round_trip() {
        let d = Dfa::from_fn(3, 2, 0, |q| q == 1, |q, x| (q + x as usize) % 2);
        let text = d.to_text();
        assert!(text.starts_with("alphabet 3\nstates 2\ninitial 0\naccepting 1\ntrans 0 0 0\n"));
        assert_eq!(Dfa::from_text(&text).unwrap(), d);
    }

    #[test]
    fn sink_fills_missing_transitions() {
        let text = "alphabet 2\nstates 2\ninitial 0\naccepting 0\nsink 1\ntrans 0 0 0 # loop\n";
        let d = Dfa::from_text(text).unwrap();
        assert!(d.accepts(&[0, 0]));
        assert!(!d.accepts(&[1]));
        let no_sink = "alphabet 2\nstates 2\ninitial 0\naccepting 0\ntrans 0 0 0\n";
        assert!(matches!(
            Dfa::from_text(no_sink),
            Err(AutomataError::Parse { .. })
        ));
    }

    #[test]
    fn transducer_round_trip() {
        let mut t = Transducer::new(2, 10, 2, 0);
        t.set_transition(0, 1, 1, vec![9, 3]);
        t.set_transition(1, 0, 0, vec![]);
        t.set_final(1, vec![7]);
        let back = Transducer::from_text(&t.to_text()).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.run(&[1, 0, 1]), Some(vec![9, 3, 9, 3, 7]));
    }
}
