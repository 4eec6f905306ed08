"""Regenerate the bundled fixture files in canonical JSON form.

Run from the repository root: python tools/make_fixtures.py
"""

import json
from pathlib import Path

from cybag.graph import AttackGraph, Node, NodeKind

FIXDIR = Path(__file__).resolve().parent.parent / "src" / "cybag" / "fixtures"

L, A, O = NodeKind.LEAF, NodeKind.AND, NodeKind.OR


def write(name: str, graph: AttackGraph, notes: str | None = None) -> None:
    from cybag.formats import write_json

    write_json(graph, FIXDIR / name, notes)
    print(f"wrote {name}: {len(graph.nodes)} nodes, {len(graph.edges)} edges")


def fig5() -> AttackGraph:
    return AttackGraph(
        [
            Node(0, L, "A", 0.7),
            Node(1, L, "B", 0.8),
            Node(2, A, "C", 0.6),
        ],
        [(0, 2), (1, 2)],
    )


def diamond() -> AttackGraph:
    return AttackGraph(
        [
            Node(0, L, "shared entry fact", 0.5),
            Node(1, A, "first route", 1.0),
            Node(2, A, "second route", 1.0),
            Node(3, O, "goal state", 1.0),
        ],
        [(0, 1), (0, 2), (1, 3), (2, 3)],
    )


def running_example() -> AttackGraph:
    nodes = [
        Node(0, L, "attackerLocated(internet)", 1.0),
        Node(1, O, "execCode(dbServer,root)", 1.0),
        Node(2, A, "RULE 2 (remote exploit of a server program)", 1.0),
        Node(3, O, "netAccess(dbServer,tcp,'3306')", 1.0),
        Node(4, A, "RULE 5 (multi-hop access)", 1.0),
        Node(5, L, "hacl(webServer,dbServer,tcp,'3306')", 1.0),
        Node(6, O, "execCode(webServer,apache)", 1.0),
        Node(7, A, "RULE 2", 1.0),
        Node(8, O, "netAccess(webServer,tcp,'80')", 1.0),
        Node(9, A, "RULE 5", 1.0),
        Node(10, L, "hacl(workStation,webServer,tcp,'80')", 1.0),
        Node(11, O, "execCode(workStation,userAccount)", 1.0),
        Node(12, A, "RULE 2", 1.0),
        Node(
            13,
            L,
            "vulExists(workStation,'CVE-2009-1918',IE,remoteExploit,privEscalation)",
            1.0,
        ),
        Node(14, O, "accessMaliciousInput(workStation,user,IE)", 1.0),
        Node(15, L, "malicious website", 0.8),
        Node(16, A, "visit of malicious website", 1.0),
        Node(
            17,
            L,
            "vulExists(dbServer,'CVE-2009-2446',mySQL,remoteExploit,privEscalation)",
            1.0,
        ),
        Node(
            18,
            L,
            "vulExists(webServer,'CVE-2006-3747',apache,remoteExploit,privEscalation)",
            1.0,
        ),
        Node(19, L, "visit of compromised website", 0.7),
        Node(20, L, "hacl(internet,webServer,tcp,'80')", 1.0),
        Node(21, A, "compromise of website", 1.0),
        Node(22, A, "RULE 6 (direct network access)", 1.0),
        Node(23, A, "RULE 5", 1.0),
        Node(24, L, "hacl(workStation,dbServer,tcp,'3306')", 1.0),
    ]
    edges = [
        (3, 2), (17, 2), (2, 1),
        (5, 4), (6, 4), (4, 3), (23, 3),
        (8, 7), (18, 7), (7, 6),
        (10, 9), (11, 9), (9, 8), (22, 8),
        (13, 12), (14, 12), (12, 11),
        (15, 16), (16, 14),
        (6, 21), (19, 21), (21, 14),
        (0, 22), (20, 22),
        (11, 23), (24, 23),
    ]
    return AttackGraph(nodes, edges)


RUNNING_NOTES = (
    "Three-host enterprise scenario (internet, webserver in a DMZ, "
    "workstations, database server) in MulVAL label style. The directed "
    "cycle (14,12,11,9,8,7,6,21,14) and the undirected loop "
    "(11,9,8,7,6,4,3,23,11) are structural; edges beyond those two "
    "documented routes are a hand reconstruction of the usual rule "
    "wiring, not scanner output."
)


def type1() -> AttackGraph:
    nodes = [
        Node(1, L, "entry fact", 0.5),
        Node(2, A, "exploit requiring the unreachable state", 1.0),
        Node(3, O, "state behind the exploit", 1.0),
        Node(4, A, "follow-up exploit", 1.0),
        Node(5, O, "prerequisite only reachable through the cycle", 1.0),
    ]
    edges = [(1, 2), (5, 2), (2, 3), (3, 4), (4, 5)]
    return AttackGraph(nodes, edges)


def type2() -> AttackGraph:
    nodes = [
        Node(1, L, "entry fact", 0.5),
        Node(2, A, "entry exploit", 1.0),
        Node(3, O, "entry state", 1.0),
        Node(4, A, "forward exploit", 1.0),
        Node(5, O, "deeper state", 1.0),
        Node(6, A, "backtracking exploit", 1.0),
        Node(7, O, "goal state", 1.0),
    ]
    edges = [(1, 2), (2, 3), (6, 3), (3, 4), (4, 5), (5, 6), (4, 7)]
    return AttackGraph(nodes, edges)


def type3() -> AttackGraph:
    base = type2()
    nodes = list(base.nodes) + [
        Node(8, L, "second entry fact", 0.5),
        Node(9, A, "mid-cycle entry exploit", 1.0),
    ]
    edges = list(base.edges) + [(8, 9), (9, 5)]
    return AttackGraph(nodes, edges)


def wang_plain_doc() -> dict:
    conditions = [
        (0, "1"), (1, "1"), (2, "1"), (3, "1"), (4, "1"),
        (5, "1"), (6, "1"), (7, "1"), (8, "1"), (9, "1"), (10, "1"),
    ]
    exploits = [
        (11, "0.8"), (12, "0.9"), (13, "0.1"), (14, "0.8"),
        (15, "0.9"), (16, "0.8"), (17, "0.9"), (18, "0.1"),
    ]
    require = [
        [0, 11], [1, 11],
        [0, 12], [5, 12],
        [0, 13], [2, 13],
        [3, 14], [6, 14],
        [7, 15],
        [0, 16], [4, 16],
        [0, 17], [8, 17],
        [9, 18],
    ]
    imply = [
        [11, 5], [12, 6], [13, 6], [14, 7],
        [15, 9], [16, 8], [17, 9], [18, 10],
    ]
    return {
        "version": "1",
        "notes": (
            "Two-machine trust/buffer-overflow scenario: ftp_rhosts and rsh "
            "against a file server and a database server, sshd and local "
            "buffer overflows as alternatives. Hand reconstruction of the "
            "textbook example; conditions 0-10, exploits 11-18."
        ),
        "conditions": [{"id": i, "p": p} for i, p in conditions],
        "exploits": [{"id": i, "p": p} for i, p in exploits],
        "require_edges": require,
        "imply_edges": imply,
    }


WANG_LABELS = {
    0: "user(0)", 1: "ftp(0,1)", 2: "sshd(0,1)", 3: "ftp(1,2)", 4: "ftp(0,2)",
    5: "trust(1,0)", 6: "user(1)", 7: "trust(2,1)", 8: "trust(2,0)",
    9: "user(2)", 10: "root(2)",
    11: "ftp_rhosts(0,1)", 12: "rsh(0,1)", 13: "sshd_bof(0,1)",
    14: "ftp_rhosts(1,2)", 15: "rsh(1,2)", 16: "ftp_rhosts(0,2)",
    17: "rsh(0,2)", 18: "local_bof(2)",
}


def main() -> None:
    from cybag.formats import plain_document_to_bag, write_json
    from cybag.graph import convert_plain

    FIXDIR.mkdir(parents=True, exist_ok=True)
    write("fig5.json", fig5())
    write("diamond.json", diamond())
    write("running-example.json", running_example(), RUNNING_NOTES)
    write("type1.json", type1(), "Cycle that can never fire.")
    write("type2.json", type2(), "Cycle removable relative to the entry state 3.")
    write(
        "type3.json",
        type3(),
        "Cycle with a second entry; it feeds the entry state 3.",
    )

    plain_doc = wang_plain_doc()
    with open(FIXDIR / "wang-plain.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(plain_doc, fh, indent=2)
        fh.write("\n")
    print("wrote wang-plain.json")

    converted = convert_plain(plain_document_to_bag(plain_doc))
    labeled = AttackGraph(
        [Node(n.id, n.kind, WANG_LABELS[n.id], n.local_prob) for n in converted.nodes],
        converted.edges,
    )
    write(
        "wang-acyclic.json",
        labeled,
        "Converted form of wang-plain.json with human-readable labels.",
    )

    feed = [
        {"cve_id": "CVE-2009-1918", "vector": "AV:N/AC:M/Au:N/C:C/I:C/A:C"},
        {"cve_id": "CVE-2006-3747", "vector": "AV:N/AC:H/Au:N/C:C/I:C/A:C"},
        {"cve_id": "CVE-2009-2446", "vector": "AV:N/AC:L/Au:S/C:C/I:C/A:C"},
    ]
    with open(FIXDIR / "nvd-feed.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(feed, fh, indent=2)
        fh.write("\n")
    print("wrote nvd-feed.json")


if __name__ == "__main__":
    main()
