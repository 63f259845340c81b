# Meromorphic regularization: series moments, Taylor jets, f_lambda and Crofton application.
