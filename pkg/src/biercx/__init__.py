"""Alexander r-tuples, Bier complexes and discrete Morse matchings on deleted joins."""
