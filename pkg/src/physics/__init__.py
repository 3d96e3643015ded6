# Physics Module
