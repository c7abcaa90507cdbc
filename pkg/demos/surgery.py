"""Two subgroups with the same sphere sizes but different generator lengths."""

from schreier import cosets, freegroup as fg

found = cosets.find_surgery_instance(seed=0)
if found is None:
    print("no instance found within the budget")
else:
    (o1, a), (o3, _) = found["e1"], found["e2"]
    print("swap", cosets.vertex_label(o1), "and", cosets.vertex_label(o3), "edges labelled", fg.format_symbol(a))
    print("v before:", found["v_before"])
    print("v after :", found["v_after"])
    print("b before:", found["b_before"])
    print("b after :", found["b_after"])
    print("degree profile preserved:", found["profile_preserved"])
    print("length formula still holds:", found["theorem_ok"])
    print(found["graph"].to_dot("modified"))
