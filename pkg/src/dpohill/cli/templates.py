"""Worked-example files written by `dpohill init`."""

TYPE_GRAPH = """typegraph tg
nodetype a1
nodetype a2
nodetype a3
edgetype A : a1 a2
edgetype B : a2
edgetype C : a1
edgetype D : a3 a3
"""

EXAMPLE_GTS = (
    """# One rule p: delete an A edge with its a2 target, recreate C on the kept node
# and add a fresh D edge between two new a3 nodes.
"""
    + TYPE_GRAPH
    + """
rule p interface ( y1 : a1 )
lhs {
node y1 : a1
node y2 : a2
edge c : C ( y1 )
edge a : A ( y1 y2 )
}
rhs {
node y1 : a1
node y3 : a3
node y4 : a3
edge c : C ( y1 )
edge d : D ( y3 y4 )
}

start G {
node x1 : a1
node x2 : a2
node x3 : a2
edge e1 : C ( x1 )
edge e2 : A ( x1 x2 )
edge e3 : A ( x1 x3 )
edge e4 : B ( x2 )
}

graph H over tg
node x1 : a1
node x2 : a2
node z1 : a3
node z2 : a3
edge e1 : C ( x1 )
edge e2 : A ( x1 x2 )
edge e4 : B ( x2 )
edge e5 : D ( z1 z2 )
"""
)

G_HG = (
    TYPE_GRAPH
    + """graph G over tg
node x1 : a1
node x2 : a2
node x3 : a2
edge e1 : C ( x1 )
edge e2 : A ( x1 x2 )
edge e3 : A ( x1 x3 )
edge e4 : B ( x2 )
"""
)

H_HG = (
    TYPE_GRAPH
    + """graph H over tg
node x1 : a1
node x2 : a2
node z1 : a3
node z2 : a3
edge e1 : C ( x1 )
edge e2 : A ( x1 x2 )
edge e4 : B ( x2 )
edge e5 : D ( z1 z2 )
"""
)

FILES = (
    ("example.gts", EXAMPLE_GTS),
    ("G.hg", G_HG),
    ("H.hg", H_HG),
)
