"""Surface syntax: lark grammar, parser, A-normal-form validation and desugaring."""
