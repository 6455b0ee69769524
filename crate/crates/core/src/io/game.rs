use crate::game::{GameDescription, Player, ReachabilityGame};

use super::{list_line, words, DocKind, FormatError, Reader};

pub fn parse_game(text: &str) -> Result<ReachabilityGame, FormatError> {
    let mut r = Reader::open(text, DocKind::Game)?;
    let states = r.ident_list("states")?;
    let reacher = r.ident_list("reacher")?;
    let avoider = r.ident_list("avoider")?;
    let init_line = r.line_no();
    let init = words(r.field("init")?, init_line)?;
    if init.len() > 1 {
        return Err(FormatError::Syntax {
            line: init_line,
            message: "`init:` takes at most one state".into(),
        });
    }
    let goal = r.ident_list("goal")?;
    let mut edges = Vec::new();
    while !r.at_end() {
        let line = r.line_no();
        let body = r.field("edge")?;
        let pair = body
            .split_once("->")
            .map(|(a, b)| (words(a, line), words(b, line)));
        match pair {
            Some((Ok(a), Ok(b))) if a.len() == 1 && b.len() == 1 => {
                edges.push((a[0].clone(), b[0].clone()));
            }
            _ => {
                return Err(FormatError::Syntax {
                    line,
                    message: "edge must read `edge: u -> w`".into(),
                })
            }
        }
    }
    GameDescription {
        states,
        reacher,
        avoider,
        init: init.into_iter().next(),
        goal,
        edges,
    }
    .build()
    .map_err(FormatError::Game)
}

pub fn serialize_game(g: &ReachabilityGame) -> String {
    let names = g.names();
    let owned = |p: Player| -> Vec<String> {
        (0..g.state_count())
            .filter(|&v| g.owner(v) == p)
            .map(|v| names[v].clone())
            .collect()
    };
    let goal: Vec<String> = (0..g.state_count())
        .filter(|&v| g.is_goal(v))
        .map(|v| names[v].clone())
        .collect();
    let mut out = vec![
        DocKind::Game.header(),
        list_line("states", names),
        list_line("reacher", &owned(Player::Reacher)),
        list_line("avoider", &owned(Player::Avoider)),
        list_line(
            "init",
            &g.init()
                .map(|v| names[v].clone())
                .into_iter()
                .collect::<Vec<_>>(),
        ),
        list_line("goal", &goal),
    ];
    for v in 0..g.state_count() {
        for &w in g.successors(v) {
            out.push(format!("edge: {} -> {}", names[v], names[w]));
        }
    }
    out.join("\n") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::tests::diamond;
    use crate::game::GameError;

    #[test]
    fn roundtrip() {
        let text = serialize_game(&diamond());
        let g = parse_game(&text).unwrap();
        assert_eq!(serialize_game(&g), text);
        assert_eq!(g.edge_count(), diamond().edge_count());
    }

    #[test]
    fn dead_end_rejected() {
        let text = "game v1\nstates: u w\nreacher: u\navoider: w\ninit: u\ngoal:\nedge: u -> w\n";
        let err = parse_game(text).unwrap_err();
        assert!(
            matches!(err, FormatError::Game(ref e) if matches!(e[0], GameError::DeadEndState(_)))
        );
    }
}
