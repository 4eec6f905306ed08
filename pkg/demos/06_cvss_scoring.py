"""From CVSS vectors to leaf probabilities, and drawing the result.

Vulnerability leaves get their local probability from the complexity
component of their CVSS vector: Low 0.71, Medium 0.61, High 0.35, and
0.61 when nothing is known. Feeds are plain JSON files so everything
works offline.
"""

from cybag import (
    apply_scores,
    fixture_path,
    import_feed,
    load_fixture,
    parse_cvss_vector,
    probability_from_complexity,
    solve_all,
    write_dot,
)

for vector in (
    "AV:N/AC:L/Au:N/C:P/I:P/A:P",
    "AV:N/AC:M/Au:N/C:C/I:C/A:C",
    "CVSS:3.1/AV:N/AC:H/PR:N/UI:N/S:U/C:H/I:H/A:H",
    "not a vector at all",
):
    score = parse_cvss_vector(vector)
    print(f"{vector[:40]:42s} -> {score.value.value:8s} "
          f"p={probability_from_complexity(score)}")

# The bundled feed covers the three vulnerabilities of the running
# example: an Internet Explorer bug on the workstations, an Apache bug on
# the webserver, a MySQL bug on the database server.
records = import_feed(fixture_path("nvd-feed.json"))
for r in records:
    print(r.cve_id, "->", probability_from_complexity(r.complexity))

g = load_fixture("running-example.json")
scored = apply_scores(g, records)
for v in (13, 17, 18):
    print(f"leaf {v}: {g.local_prob(v)} -> {scored.local_prob(v)}")

# How much harder did the database server become once real exploit
# difficulty is taken into account?
before, after = solve_all(g), solve_all(scored)
print(f"P(database compromised): {before[1]:.4f} -> {after[1]:.4f}")

# Export for graphviz: states are diamonds, actions ellipses, facts boxes.
write_dot(scored, "running-example.dot", after)
print("wrote running-example.dot (render with: dot -Tpng -O running-example.dot)")
