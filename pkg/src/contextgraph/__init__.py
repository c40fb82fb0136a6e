"""Context graphs: theory graphs with pushouts, attacks and analogy search."""
