"""permadd: permute-and-add network codes over group algebras."""
