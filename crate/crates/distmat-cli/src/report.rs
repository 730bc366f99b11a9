//! Report rendering.
//!
//! A report is a sequence of `# key value` comment lines followed by the
//! matching as `m <s> <t>` lines. The comment prefix makes every report a
//! valid matching file, so the output of `solve`/`approx` feeds directly
//! back into `verify`. Rationals are rendered exactly as `p/q`; decimal
//! renderings appear only in keys suffixed `_decimal`.

use distmat::core::{Instance, Matching, Mode, Variant};
use distmat::rational::{fmt_rat, fmt_rat_decimal, Rat};

pub struct Report {
    lines: Vec<String>,
    matching: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            lines: vec!["# dm report".to_string(), format!("# command {command}")],
            matching: Vec::new(),
        }
    }

    pub fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        self.lines.push(format!("# {key} {value}"));
    }

    pub fn kv_rat(&mut self, key: &str, value: &Rat) {
        self.kv(key, fmt_rat(value));
        self.kv(&format!("{key}_decimal"), fmt_rat_decimal(value));
    }

    pub fn instance_block(&mut self, name: &str, digest: &str, inst: &Instance) {
        self.kv("instance", name);
        self.kv("digest", digest);
        self.kv("n", inst.n());
        self.kv("k", inst.k());
        self.kv("d", inst.d());
        self.kv(
            "mode",
            match inst.mode() {
                Mode::Perfect => "perfect",
                Mode::Maximum => "max",
            },
        );
        self.kv(
            "variant",
            match inst.variant() {
                Variant::Line => "line",
                Variant::Cycle => "cycle",
            },
        );
    }

    pub fn matching(&mut self, inst: &Instance, m: &Matching) {
        self.kv("size", m.len());
        for (s, t) in m.pairs(inst) {
            self.matching.push(format!("m {s} {t}"));
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for line in self.lines.iter().chain(self.matching.iter()) {
            out.push_str(line);
            out.push('\n');
        }
        out
    }

    pub fn print(&self) {
        print!("{}", self.render());
    }
}
