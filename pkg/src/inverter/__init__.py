from .inverter import (invert_class, invert_method, invert_program, invert_statement,
                       invert_statement_modified, invert_statements)
