use crate::types::Role;

/// One recorded engine event.
#[derive(Debug, Clone, PartialEq)]
pub enum TranscriptEvent {
    Wcf {
        outcome: u8,
    },
    Message {
        attempt: u32,
        round: u32,
        from: Role,
        kind: &'static str,
        len: usize,
        lost: bool,
    },
    /// Transparent resend of a classical message after a loss.
    Resend {
        attempt: u32,
        round: u32,
        from: Role,
    },
    LossDeclared {
        attempt: u32,
        round: u32,
        by: Role,
    },
    Restart {
        attempt: u32,
    },
    Measurement {
        attempt: u32,
        round: u32,
        party: Role,
        outcome: usize,
        probabilities: Vec<f64>,
    },
    Done {
        attempt: u32,
        party: Role,
    },
    Abort {
        attempt: u32,
        by: Role,
        note: String,
    },
}

impl TranscriptEvent {
    fn line(&self) -> String {
        match self {
            TranscriptEvent::Wcf { outcome } => format!("wcf c={outcome}"),
            TranscriptEvent::Message {
                attempt,
                round,
                from,
                kind,
                len,
                lost,
            } => format!(
                "msg attempt={attempt} round={round} from={} kind={kind} len={len} lost={}",
                from.letter(),
                u8::from(*lost)
            ),
            TranscriptEvent::Resend {
                attempt,
                round,
                from,
            } => format!("resend attempt={attempt} round={round} from={}", from.letter()),
            TranscriptEvent::LossDeclared { attempt, round, by } => {
                format!("declare attempt={attempt} round={round} by={}", by.letter())
            }
            TranscriptEvent::Restart { attempt } => format!("restart attempt={attempt}"),
            TranscriptEvent::Measurement {
                attempt,
                round,
                party,
                outcome,
                probabilities,
            } => {
                let probs: Vec<String> =
                    probabilities.iter().map(|p| format!("{p:.12}")).collect();
                format!(
                    "measure attempt={attempt} round={round} party={} outcome={outcome} probs=[{}]",
                    party.letter(),
                    probs.join(",")
                )
            }
            TranscriptEvent::Done { attempt, party } => {
                format!("done attempt={attempt} party={}", party.letter())
            }
            TranscriptEvent::Abort { attempt, by, note } => {
                format!("abort attempt={attempt} by={} note={note}", by.letter())
            }
        }
    }
}

/// The recorded exchange of one protocol run.
#[derive(Debug, Clone, PartialEq)]
pub struct Transcript {
    pub seed: u64,
    pub protocol: String,
    pub events: Vec<TranscriptEvent>,
    pub final_state: String,
    pub outcome: String,
}

impl Transcript {
    pub fn new(seed: u64, protocol: String) -> Self {
        Self {
            seed,
            protocol,
            events: Vec::new(),
            final_state: String::new(),
            outcome: String::new(),
        }
    }

    pub fn push(&mut self, ev: TranscriptEvent) {
        self.events.push(ev);
    }

    pub fn restart_count(&self) -> usize {
        self.events
            .iter()
            .filter(|e| matches!(e, TranscriptEvent::Restart { .. }))
            .count()
    }

    pub fn attempt_count(&self) -> usize {
        self.restart_count() + 1
    }

    pub fn resend_count(&self) -> usize {
        self.events
            .iter()
            .filter(|e| matches!(e, TranscriptEvent::Resend { .. }))
            .count()
    }

    /// Line-oriented structured text: one event per line, used by golden-file
    /// tests and the CLI's transcript dump.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("seed {}\n", self.seed));
        out.push_str(&format!("protocol {}\n", self.protocol));
        for ev in &self.events {
            out.push_str(&ev.line());
            out.push('\n');
        }
        out.push_str(&format!("outcome {}\n", self.outcome));
        out.push_str(&format!("state {}\n", self.final_state));
        out
    }
}
